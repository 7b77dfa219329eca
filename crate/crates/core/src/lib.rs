pub mod apoly;
pub mod error;
pub mod field;
pub mod linalg;
pub mod ore;
pub mod drinfeld;
pub mod quadclass;
pub mod par;
pub mod census;
