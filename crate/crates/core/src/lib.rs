//! Exact symbolic computation of the ground state of the inhomogeneous
//! crossing O(1) loop model on a cylinder of perimeter `2n`, together with its
//! sum rules, recursions and multidegree specializations.

pub mod brauer;
pub mod degrees;
pub mod fixtures;
pub mod linkpat;
pub mod poly;
pub mod report;
pub mod suites;
pub mod sumrules;
pub mod groundstate;
pub mod points;
pub mod pointwise;
