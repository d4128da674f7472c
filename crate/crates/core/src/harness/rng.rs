use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conv::Tensor;

/// Which tensor of a trial a random stream feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Input,
    Kernel,
    LayerInput,
    LayerWeights,
}

impl Role {
    fn lane(self) -> u64 {
        match self {
            Role::Input => 0,
            Role::Kernel => 1,
            Role::LayerInput => 2,
            Role::LayerWeights => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Distribution {
    /// i.i.d. uniform on `[-range, range)`.
    UniformSym { range: f64 },
}

impl Default for Distribution {
    fn default() -> Self {
        Distribution::UniformSym { range: 1.0 }
    }
}

/// Deterministic random tensor for `(seed, index, role)`.
///
/// Each key selects its own ChaCha stream, so no state is shared between
/// trials and they can be generated in any order.
pub fn gen_random(shape: &[usize], seed: u64, index: u64, role: Role, dist: Distribution) -> Tensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_mul(4).wrapping_add(role.lane()));
    let len: usize = shape.iter().product();
    let Distribution::UniformSym { range } = dist;
    let data = (0..len).map(|_| rng.gen_range(-range..range)).collect();
    Tensor::new(shape.to_vec(), data).expect("length matches shape")
}
