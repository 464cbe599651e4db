//! Classical methods used as comparators and oracles.

mod apportion;
mod simple;
mod stv;

pub use apportion::{divisor_method, quota_method, DivisorSequence, Quota, QuotaBase, QuotaRounding, QuotaSpec};
pub use simple::{simple_elect, SimpleMethod};
pub use stv::{stv_elect, stv_quota_from_phragmen, TransferOrder, TransferPolicy, TransferValue};
