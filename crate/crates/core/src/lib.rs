pub mod binform;
pub mod curvegen;
pub mod exec;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod qmap;
pub mod quadrics;
pub mod rankindex;
