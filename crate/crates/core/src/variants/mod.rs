//! Relatives of Phragmén's method: Eneström's quota method, the
//! load-optimization family and the full-ballot limit method.

mod enestrom;
mod limit;
mod loads;
mod opt_load;

pub use enestrom::enestrom_elect;
pub use limit::limit_method_elect;
pub use opt_load::{committee_loads, opt_load_elect, opt_load_elect_with_budget, Criterion, OptCombo, OptMode, Split};
