#![allow(dead_code)]

use std::path::PathBuf;

use primal_dual::{load_quadratic, Program64, QuadraticProgramSpec, Saddle64};

/// Test problem with its optimizer derived by hand from the KKT system
/// (independently of the problem file's `saddle` annotation).
pub struct Oracle {
    pub name: &'static str,
    pub file: &'static str,
    pub x_star: &'static [f64],
    pub lambda_star: &'static [f64],
}

/// - example1: f = -(x-5)^2, g = x^2 - 1. Unconstrained max x = 5 is
///   infeasible, so g is active: x = 1 (x = -1 gives lambda < 0);
///   10 - 2x = 2 lambda x  =>  lambda = 4.
/// - halfplane: f = -|x|^2/2 + 2(x1 + x2), g = x1 + x2 - 2. Stationarity
///   x = (2,2) - lambda(1,1); activity 4 - 2 lambda = 2 => lambda = 1, x = (1,1).
/// - disk: f = -(x1^2 + 2 x2^2) + 4 x1 + 6 x2, g1 = x1^2 + x2^2 - 2,
///   g2 = x2 - 3. With g2 inactive: 4 - 2x1 = 2 l1 x1, 6 - 4x2 = 2 l1 x2, and
///   x = (1,1) on the circle gives l1 = 1 from both rows; g2(1,1) = -2 < 0.
pub const ORACLES: [Oracle; 3] = [
    Oracle {
        name: "example1",
        file: "example1.json",
        x_star: &[1.0],
        lambda_star: &[4.0],
    },
    Oracle {
        name: "halfplane",
        file: "halfplane.json",
        x_star: &[1.0, 1.0],
        lambda_star: &[1.0],
    },
    Oracle {
        name: "disk",
        file: "disk.json",
        x_star: &[1.0, 1.0],
        lambda_star: &[1.0, 0.0],
    },
];

pub fn problems_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems")
}

impl Oracle {
    pub fn spec(&self) -> QuadraticProgramSpec {
        QuadraticProgramSpec::from_json_file(problems_dir().join(self.file)).unwrap()
    }

    pub fn program(&self) -> Program64 {
        load_quadratic(&self.spec()).unwrap()
    }

    pub fn saddle(&self) -> Saddle64 {
        Saddle64::new_unchecked(self.x_star.to_vec(), self.lambda_star.to_vec())
    }
}

pub fn example1() -> Program64 {
    ORACLES[0].program()
}
