//! Time-varying capacitors as one-port and lossless two-port devices.
//!
//! The one-port model `Q = C(t)V` treats `C(t)` as an exogenous signal and
//! can deliver net energy over a cycle. The two-port model makes `C` a state
//! driven through a mechanical port `(U, F)` and balances exactly.
//!
//! ```
//! use tvcap_core::energy::cycle_energy;
//! use tvcap_core::extract::reference_profile;
//! use tvcap_core::oneport::OnePortModel;
//! use tvcap_core::signals::CapacitanceProfile;
//!
//! let period = 4.0 * core::f64::consts::PI;
//! let cap = CapacitanceProfile::sinusoidal(2.0, 1.0, 0.5).unwrap();
//! let model = OnePortModel::with_charge(cap, 0.0).unwrap();
//! let traj = model.simulate_current_driven(&reference_profile(), period, period / 4096.0).unwrap();
//! let e = cycle_energy(&traj, 0.0, period).unwrap();
//! assert!(e.supplied < 0.0);
//! ```

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod energy;
pub mod error;
pub mod extract;
pub mod linalg;
pub mod ode;
pub mod oneport;
pub mod paradox;
pub mod quad;
pub mod signals;
pub mod trajectory;
pub mod twoport;

pub use error::{Error, Result};
