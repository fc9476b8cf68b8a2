//! Periodic Cartesian grids and the D2Q5 / D2Q9 velocity sets.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    D2Q5,
    D2Q9,
}

impl LatticeKind {
    pub fn q(self) -> usize {
        match self {
            LatticeKind::D2Q5 => 5,
            LatticeKind::D2Q9 => 9,
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::D2Q5 => f.write_str("D2Q5"),
            LatticeKind::D2Q9 => f.write_str("D2Q9"),
        }
    }
}

impl FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d2q5" => Ok(LatticeKind::D2Q5),
            "d2q9" => Ok(LatticeKind::D2Q9),
            other => Err(Error::Config(format!("unknown lattice `{other}`"))),
        }
    }
}

/// Rest speed, the four axis speeds counter-clockwise from +x, then the
/// four diagonals counter-clockwise from (1, 1).
const UNIT_SPEEDS: [[i32; 2]; 9] = [
    [0, 0],
    [1, 0],
    [0, 1],
    [-1, 0],
    [0, -1],
    [1, 1],
    [-1, 1],
    [-1, -1],
    [1, -1],
];

/// Lattice speeds `c_ζ = λ e_ζ` with integer directions `e_ζ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocitySet {
    kind: LatticeKind,
    lambda: f64,
}

impl VelocitySet {
    pub fn new(kind: LatticeKind, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Config(format!(
                "lattice speed must be positive, got {lambda}"
            )));
        }
        Ok(Self { kind, lambda })
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn q(&self) -> usize {
        self.kind.q()
    }

    /// Integer directions `e_ζ` (speeds in units of λ).
    pub fn directions(&self) -> &'static [[i32; 2]] {
        &UNIT_SPEEDS[..self.q()]
    }

    pub fn speed(&self, zeta: usize) -> [f64; 2] {
        let [ex, ey] = self.directions()[zeta];
        [self.lambda * ex as f64, self.lambda * ey as f64]
    }

    pub fn speeds(&self) -> Vec<[f64; 2]> {
        (0..self.q()).map(|z| self.speed(z)).collect()
    }
}

/// Counter-clockwise quarter turn of a 2-vector.
pub fn rotate_quarter([x, y]: [f64; 2]) -> [f64; 2] {
    [-y, x]
}

/// Periodic square grid on `(−half_extent, half_extent)²` with
/// cell-centred nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    delta: f64,
    half_extent: f64,
    n: usize,
}

impl Grid {
    /// Grid of step `delta`; `2·half_extent/delta` must be a power of two.
    pub fn new(half_extent: f64, delta: f64) -> Result<Self> {
        if !(half_extent > 0.0 && delta > 0.0) {
            return Err(Error::Config(format!(
                "grid needs positive extent and step, got half_extent={half_extent}, delta={delta}"
            )));
        }
        let ratio = 2.0 * half_extent / delta;
        let n = ratio.round();
        if (ratio - n).abs() > 1e-9 * ratio || n < 1.0 {
            return Err(Error::Config(format!(
                "step {delta} does not divide the domain width {}",
                2.0 * half_extent
            )));
        }
        Self::with_nodes(half_extent, n as usize)
    }

    pub fn with_nodes(half_extent: f64, n_per_side: usize) -> Result<Self> {
        if !n_per_side.is_power_of_two() {
            return Err(Error::Config(format!(
                "nodes per side must be a power of two, got {n_per_side}"
            )));
        }
        if half_extent.is_nan() || half_extent <= 0.0 {
            return Err(Error::Config(format!(
                "half extent must be positive, got {half_extent}"
            )));
        }
        Ok(Self {
            delta: 2.0 * half_extent / n_per_side as f64,
            half_extent,
            n: n_per_side,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn n_per_side(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Row-major storage index; `i` runs along x.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    #[inline]
    pub fn coords_of(&self, idx: usize) -> (usize, usize) {
        (idx % self.n, idx / self.n)
    }

    /// Physical position of node `(i, j)`.
    #[inline]
    pub fn position(&self, i: usize, j: usize) -> [f64; 2] {
        [self.axis(i), self.axis(j)]
    }

    #[inline]
    pub fn axis(&self, i: usize) -> f64 {
        -self.half_extent + (i as f64 + 0.5) * self.delta
    }

    #[inline]
    pub fn radius(&self, i: usize, j: usize) -> f64 {
        let [x, y] = self.position(i, j);
        x.hypot(y)
    }

    /// `i + d` wrapped onto `0..n`.
    #[inline]
    pub fn wrap(&self, i: usize, d: i32) -> usize {
        let n = self.n as i64;
        (i as i64 + d as i64).rem_euclid(n) as usize
    }

    /// Index of the node reached from `(i, j)` by a counter-clockwise quarter
    /// turn about the origin.
    #[inline]
    pub fn rotate_index(&self, i: usize, j: usize) -> (usize, usize) {
        (self.n - 1 - j, i)
    }
}

/// Destination of node `ij` after transport by `k·c_zeta`.
pub fn shift_index(grid: &Grid, ij: (usize, usize), c_zeta: [f64; 2], k: f64) -> Result<(usize, usize)> {
    let delta = grid.delta();
    let mut offsets = [0i32; 2];
    for (o, c) in offsets.iter_mut().zip(c_zeta) {
        let cells = k * c / delta;
        let r = cells.round();
        if (cells - r).abs() > 1e-9 * cells.abs().max(1.0) {
            return Err(Error::NotLatticeCompatible {
                cx: c_zeta[0],
                cy: c_zeta[1],
                k,
                delta,
            });
        }
        *o = r as i32;
    }
    Ok((grid.wrap(ij.0, offsets[0]), grid.wrap(ij.1, offsets[1])))
}

/// Time discretisation: `n_steps` steps of size `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub k: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    /// Kinetic time step `k = Δ/λ`, with `round(T/k)` steps.
    pub fn for_lattice(grid: &Grid, vs: &VelocitySet, t_final: f64) -> Self {
        Self::with_step(grid.delta() / vs.lambda(), t_final)
    }

    pub fn with_step(k: f64, t_final: f64) -> Self {
        let n_steps = (t_final / k).round().max(0.0) as usize;
        Self { k, n_steps }
    }

    /// Time actually reached, `N·k`.
    pub fn t_final(&self) -> f64 {
        self.n_steps as f64 * self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_speeds() {
        let d2q5 = VelocitySet::new(LatticeKind::D2Q5, 1.0).unwrap();
        assert_eq!(d2q5.speed(3), [-1.0, 0.0]);
        assert_eq!(d2q5.q(), 5);
        let d2q9 = VelocitySet::new(LatticeKind::D2Q9, 2.0).unwrap();
        assert_eq!(d2q9.speed(7), [-2.0, -2.0]);
        assert_eq!(rotate_quarter(d2q5.speed(1)), d2q5.speed(2));
    }

    #[test]
    fn rotation_generates_speeds() {
        let vs = VelocitySet::new(LatticeKind::D2Q9, 1.5).unwrap();
        let mut c = vs.speed(1);
        for z in 2..5 {
            c = rotate_quarter(c);
            assert_eq!(c, vs.speed(z));
        }
        let mut c = vs.speed(5);
        for z in 6..9 {
            c = rotate_quarter(c);
            assert_eq!(c, vs.speed(z));
        }
    }

    #[test]
    fn speeds_sum_to_zero() {
        for kind in [LatticeKind::D2Q5, LatticeKind::D2Q9] {
            let vs = VelocitySet::new(kind, 0.7).unwrap();
            let s = vs.speeds().iter().fold([0.0, 0.0], |a, c| [a[0] + c[0], a[1] + c[1]]);
            assert_eq!(s, [0.0, 0.0]);
        }
    }

    #[test]
    fn rejects_bad_lambda() {
        assert!(VelocitySet::new(LatticeKind::D2Q5, 0.0).is_err());
        assert!(VelocitySet::new(LatticeKind::D2Q5, -1.0).is_err());
    }

    #[test]
    fn grid_geometry() {
        let g = Grid::new(4.0, 0.5).unwrap();
        assert_eq!(g.n_per_side(), 16);
        assert_eq!(g.position(0, 0), [-3.75, -3.75]);
        assert_eq!(g.position(15, 8), [3.75, 0.25]);
        assert!(Grid::new(4.0, 0.3).is_err());
        assert!(Grid::with_nodes(4.0, 12).is_err());
    }

    #[test]
    fn shift_examples() {
        let g = Grid::with_nodes(2.0, 4).unwrap();
        let lambda = 3.0;
        let k = g.delta() / lambda;
        assert_eq!(shift_index(&g, (3, 0), [lambda, 0.0], k).unwrap(), (0, 0));
        assert_eq!(shift_index(&g, (1, 1), [0.0, 0.0], 17.3).unwrap(), (1, 1));
        assert_eq!(shift_index(&g, (0, 0), [-lambda, -lambda], k).unwrap(), (3, 3));
        let err = shift_index(&g, (0, 0), [lambda, 0.0], 0.4 * k).unwrap_err();
        assert!(matches!(err, Error::NotLatticeCompatible { .. }));
    }

    #[test]
    fn streaming_is_a_permutation() {
        let g = Grid::with_nodes(1.0, 8).unwrap();
        let vs = VelocitySet::new(LatticeKind::D2Q9, 1.0).unwrap();
        let k = g.delta();
        for z in 0..vs.q() {
            let c = vs.speed(z);
            let mut hit = vec![false; g.len()];
            for j in 0..8 {
                for i in 0..8 {
                    let (a, b) = shift_index(&g, (i, j), c, k).unwrap();
                    assert!(!hit[g.index(a, b)]);
                    hit[g.index(a, b)] = true;
                    let back = shift_index(&g, (a, b), [-c[0], -c[1]], k).unwrap();
                    assert_eq!(back, (i, j));
                }
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn time_grid_rounding() {
        let g = Grid::new(4.0, 1.0 / 16.0).unwrap();
        let vs = VelocitySet::new(LatticeKind::D2Q5, 2f64.sqrt()).unwrap();
        let tg = TimeGrid::for_lattice(&g, &vs, 1.0);
        assert_eq!(tg.n_steps, 23);
        assert!((tg.t_final() - 1.0).abs() <= tg.k);
    }
}
