pub mod decompose;
pub mod gen_toy;
pub mod interactions;
pub mod table;
pub mod trajectory;
pub mod verify;
