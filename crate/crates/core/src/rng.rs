//! Seeded randomness.
//!
//! Every randomized procedure uses ChaCha8 seeded from the user seed via
//! `seed_from_u64`. Independent units of work (tree `i`, bagging round `i`,
//! data split `i`) each get stream `i` of that generator, so results do not
//! depend on the order in which units are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
