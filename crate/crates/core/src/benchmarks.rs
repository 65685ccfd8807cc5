//! The seven test functions, their search domains and acceptance thresholds.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::config::Bounds;
use crate::rng::{mix_seed, RngStream};
use crate::{Error, Result};

/// Base seed for rotation matrices; see [`default_rotation_seed`].
pub const ROTATION_SEED_BASE: u64 = 0x2F6B_1C3A_9D84_E507;

/// Schwefel offset per dimension.
const SCHWEFEL_OFFSET: f64 = 418.9829;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkFunction {
    Sphere,
    Rosenbrock,
    Rastrigin,
    Griewank,
    Schwefel,
    RotatedGriewank,
    RotatedRastrigin,
}

impl BenchmarkFunction {
    pub const ALL: [BenchmarkFunction; 7] = [
        BenchmarkFunction::Sphere,
        BenchmarkFunction::Rosenbrock,
        BenchmarkFunction::Rastrigin,
        BenchmarkFunction::Griewank,
        BenchmarkFunction::Schwefel,
        BenchmarkFunction::RotatedGriewank,
        BenchmarkFunction::RotatedRastrigin,
    ];

    /// Short id, `f1` through `f7`.
    pub fn id(self) -> &'static str {
        match self {
            BenchmarkFunction::Sphere => "f1",
            BenchmarkFunction::Rosenbrock => "f2",
            BenchmarkFunction::Rastrigin => "f3",
            BenchmarkFunction::Griewank => "f4",
            BenchmarkFunction::Schwefel => "f5",
            BenchmarkFunction::RotatedGriewank => "f6",
            BenchmarkFunction::RotatedRastrigin => "f7",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkFunction::Sphere => "sphere",
            BenchmarkFunction::Rosenbrock => "rosenbrock",
            BenchmarkFunction::Rastrigin => "rastrigin",
            BenchmarkFunction::Griewank => "griewank",
            BenchmarkFunction::Schwefel => "schwefel",
            BenchmarkFunction::RotatedGriewank => "rotated-griewank",
            BenchmarkFunction::RotatedRastrigin => "rotated-rastrigin",
        }
    }

    /// Half width of the symmetric search domain.
    pub fn half_width(self) -> f64 {
        match self {
            BenchmarkFunction::Sphere | BenchmarkFunction::Rosenbrock => 100.0,
            BenchmarkFunction::Rastrigin | BenchmarkFunction::RotatedRastrigin => 5.12,
            BenchmarkFunction::Griewank | BenchmarkFunction::RotatedGriewank => 600.0,
            BenchmarkFunction::Schwefel => 500.0,
        }
    }

    /// Threshold below which a final value counts as a success.
    pub fn acceptance(self) -> f64 {
        match self {
            BenchmarkFunction::Sphere => 0.01,
            BenchmarkFunction::Rosenbrock => 500.0,
            BenchmarkFunction::Rastrigin => 50.0,
            BenchmarkFunction::Griewank => 0.5,
            BenchmarkFunction::Schwefel => 7000.0,
            BenchmarkFunction::RotatedGriewank => 5.0,
            BenchmarkFunction::RotatedRastrigin => 150.0,
        }
    }

    pub fn is_rotated(self) -> bool {
        matches!(
            self,
            BenchmarkFunction::RotatedGriewank | BenchmarkFunction::RotatedRastrigin
        )
    }

    /// A global minimizer in `dimension` dimensions.
    pub fn optimum(self, dimension: usize) -> Vec<f64> {
        match self {
            BenchmarkFunction::Rosenbrock => vec![1.0; dimension],
            BenchmarkFunction::Schwefel => vec![420.968_746_359_982; dimension],
            _ => vec![0.0; dimension],
        }
    }

    fn base_value(self, z: &[f64]) -> f64 {
        match self {
            BenchmarkFunction::Sphere => sphere(z),
            BenchmarkFunction::Rosenbrock => rosenbrock(z),
            BenchmarkFunction::Rastrigin | BenchmarkFunction::RotatedRastrigin => rastrigin(z),
            BenchmarkFunction::Griewank | BenchmarkFunction::RotatedGriewank => griewank(z),
            BenchmarkFunction::Schwefel => schwefel(z),
        }
    }
}

impl fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BenchmarkFunction {
    type Err = Error;

    /// Accepts `f1`..`f7` or the long names, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        BenchmarkFunction::ALL
            .into_iter()
            .find(|f| f.id() == key || f.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown benchmark function '{s}'")))
    }
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (TAU * v).cos() + 10.0)
        .sum()
}

fn griewank(x: &[f64]) -> f64 {
    let (sum, prod) = x.iter().enumerate().fold((0.0, 1.0), |(s, p), (d, v)| {
        (s + v * v, p * (v / ((d + 1) as f64).sqrt()).cos())
    });
    1.0 + sum / 4000.0 - prod
}

fn schwefel(x: &[f64]) -> f64 {
    SCHWEFEL_OFFSET * x.len() as f64 - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
}

/// Square orthogonal matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    dimension: usize,
    entries: Vec<f64>,
}

impl Rotation {
    pub fn identity(dimension: usize) -> Self {
        let mut entries = vec![0.0; dimension * dimension];
        for d in 0..dimension {
            entries[d * dimension + d] = 1.0;
        }
        Rotation { dimension, entries }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.entries[r * self.dimension..(r + 1) * self.dimension]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.dimension + c]
    }

    /// Writes `R x` into `out`.
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o = self.row(r).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        self.apply_into(x, &mut out);
        out
    }

    /// Largest absolute entry of `R^T R - I`.
    pub fn orthogonality_error(&self) -> f64 {
        let n = self.dimension;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| self.get(k, i) * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Seeded random orthogonal matrix.
///
/// Rows of a matrix of independent standard normals (drawn row-major from
/// `RngStream::from_seed(seed)`) are orthonormalized by modified Gram-Schmidt
/// with one reorthogonalization pass. Each row keeps the sign of its own
/// projection, so the result is fully determined by `(dimension, seed)`.
pub fn make_rotation(dimension: usize, seed: u64) -> Rotation {
    let n = dimension;
    let mut rng = RngStream::from_seed(seed);
    let mut rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.standard_normal()).collect())
        .collect();
    for i in 0..n {
        let (done, rest) = rows.split_at_mut(i);
        let row = &mut rest[0];
        for _pass in 0..2 {
            for q in done.iter() {
                let proj: f64 = q.iter().zip(row.iter()).map(|(a, b)| a * b).sum();
                for (r, a) in row.iter_mut().zip(q) {
                    *r -= proj * a;
                }
            }
        }
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        // A degenerate draw has probability zero; fall back to a basis vector.
        if norm < 1e-300 {
            row.iter_mut().for_each(|v| *v = 0.0);
            row[i] = 1.0;
        } else {
            row.iter_mut().for_each(|v| *v /= norm);
        }
    }
    Rotation {
        dimension: n,
        entries: rows.into_iter().flatten().collect(),
    }
}

/// Rotation seed used for `function` in `dimension` dimensions unless overridden:
/// `mix_seed(mix_seed(ROTATION_SEED_BASE, function number), dimension)`.
pub fn default_rotation_seed(function: BenchmarkFunction, dimension: usize) -> u64 {
    let number = BenchmarkFunction::ALL
        .iter()
        .position(|&f| f == function)
        .unwrap_or(0) as u64
        + 1;
    mix_seed(mix_seed(ROTATION_SEED_BASE, number), dimension as u64)
}

/// A test function instantiated in a given dimension.
#[derive(Clone, Debug)]
pub struct BenchmarkProblem {
    pub function: BenchmarkFunction,
    pub dimension: usize,
    pub bounds: Bounds,
    pub acceptance: f64,
    pub global_min_value: f64,
    pub rotation: Option<Rotation>,
    pub rotation_seed: Option<u64>,
}

impl BenchmarkProblem {
    pub fn new(function: BenchmarkFunction, dimension: usize) -> Result<Self> {
        Self::with_rotation_seed(
            function,
            dimension,
            default_rotation_seed(function, dimension),
        )
    }

    /// Like [`BenchmarkProblem::new`] with an explicit rotation seed, which is
    /// ignored for unrotated functions.
    pub fn with_rotation_seed(
        function: BenchmarkFunction,
        dimension: usize,
        seed: u64,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Config("benchmark dimension must be positive".into()));
        }
        let (rotation, rotation_seed) = if function.is_rotated() {
            (Some(make_rotation(dimension, seed)), Some(seed))
        } else {
            (None, None)
        };
        Ok(BenchmarkProblem {
            function,
            dimension,
            bounds: Bounds::symmetric(dimension, function.half_width())?,
            acceptance: function.acceptance(),
            global_min_value: 0.0,
            rotation,
            rotation_seed,
        })
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::Config(format!(
                "{} expects {} coordinates, got {}",
                self.function,
                self.dimension,
                x.len()
            )));
        }
        Ok(self.value(x))
    }

    /// Objective value without the dimension check.
    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        match &self.rotation {
            Some(r) => self.function.base_value(&r.apply(x)),
            None => self.function.base_value(x),
        }
    }
}
