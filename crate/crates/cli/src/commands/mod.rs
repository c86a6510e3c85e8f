pub mod check;
pub mod classify;
pub mod reproduce;
pub mod simulate;
pub mod sweep;
