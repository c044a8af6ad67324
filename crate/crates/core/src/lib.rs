pub mod brieskorn;
pub mod classify;
pub mod linalg;
pub mod local;
pub mod logforms;
pub mod periods;
pub mod poly;
pub mod quasihomog;
