//! Test support for the SAGA crates: seeded generators for scripts and
//! stories, reference implementations that share no code with the library
//! (cycle search, reachability, tokenizing, story walking), and property
//! checks built from the two.
//!
//! Every property takes a case count and a seed and returns `Err` with a
//! reproducible description of the first counterexample.

pub mod gen;
pub mod oracle;
pub mod props;

pub use rand;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
