pub mod curves;
pub mod freegroup;
pub mod mcg;
pub mod linalg;
pub mod forms;
pub mod par;
pub mod kirby;
pub mod palf;
pub mod formats;
pub mod catalog;
pub mod selftest;
pub mod report;
