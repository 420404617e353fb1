//! Shape fixtures shared by unit tests.

use std::collections::BTreeSet;

use rand::{rngs::StdRng, Rng};

use crate::assembly::{Pos, Side};
use crate::verify::Shape;

/// A random polyomino of `n` cells grown from the origin.
pub fn random_polyomino(rng: &mut StdRng, n: usize) -> Shape {
    let mut cells = BTreeSet::from([Pos::new(0, 0)]);
    while cells.len() < n {
        let v: Vec<Pos> = cells.iter().copied().collect();
        cells.insert(v[rng.gen_range(0..v.len())].step(Side::ALL[rng.gen_range(0..4)]));
    }
    Shape::new(cells).unwrap()
}
