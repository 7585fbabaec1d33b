use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Points of unit Euclidean norm used as node directions in a Gaussian
/// lattice shell.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitHypersphere {
    pub points: Vec<Vec<f64>>,
}

impl UnitHypersphere {
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Places `n_points` directions on the unit sphere in `dim` dimensions.
///
/// * 1-D: alternating `+1, -1`.
/// * 2-D: evenly spaced angles `2*pi*k/n`.
/// * 3-D: Fibonacci (golden-angle) spiral.
/// * 4-D and above: normalised standard-normal draws from `rng`.
///
/// Only the 4-D+ case consumes randomness.
pub fn construct_unit_hypersphere<R: Rng + ?Sized>(
    n_points: usize,
    dim: usize,
    rng: &mut R,
) -> UnitHypersphere {
    let points = match dim {
        0 => Vec::new(),
        1 => (0..n_points)
            .map(|k| vec![if k % 2 == 0 { 1.0 } else { -1.0 }])
            .collect(),
        2 => (0..n_points)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n_points as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => fibonacci_sphere(n_points),
        _ => (0..n_points).map(|_| gaussian_direction(dim, rng)).collect(),
    };
    UnitHypersphere {
        points: points.into_iter().map(normalized).collect(),
    }
}

fn fibonacci_sphere(n: usize) -> Vec<Vec<f64>> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let theta = golden_angle * i as f64;
            vec![r * theta.cos(), r * theta.sin(), z]
        })
        .collect()
}

fn gaussian_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-24 {
            return v;
        }
    }
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}
