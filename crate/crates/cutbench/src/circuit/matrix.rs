//! Complex 2x2 matrices for single-qubit unitaries.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Row-major 2x2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Mat2 {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Mat2 {
        Mat2::new(C64::ONE, C64::ZERO, C64::ZERO, C64::ONE)
    }

    pub fn h() -> Mat2 {
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Mat2::new(s, s, s, -s)
    }

    pub fn x() -> Mat2 {
        Mat2::new(C64::ZERO, C64::ONE, C64::ONE, C64::ZERO)
    }

    pub fn y() -> Mat2 {
        Mat2::new(C64::ZERO, -C64::I, C64::I, C64::ZERO)
    }

    pub fn z() -> Mat2 {
        Mat2::new(C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE)
    }

    /// Phase gate diag(1, i).
    pub fn s() -> Mat2 {
        Mat2::new(C64::ONE, C64::ZERO, C64::ZERO, C64::I)
    }

    pub fn rx(theta: f64) -> Mat2 {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2::new(
            C64::new(c, 0.0),
            C64::new(0.0, -s),
            C64::new(0.0, -s),
            C64::new(c, 0.0),
        )
    }

    pub fn ry(theta: f64) -> Mat2 {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2::new(
            C64::new(c, 0.0),
            C64::new(-s, 0.0),
            C64::new(s, 0.0),
            C64::new(c, 0.0),
        )
    }

    pub fn rz(theta: f64) -> Mat2 {
        Mat2::new(
            C64::from_polar(1.0, -theta / 2.0),
            C64::ZERO,
            C64::ZERO,
            C64::from_polar(1.0, theta / 2.0),
        )
    }

    /// Rotation about the given Pauli axis: `exp(-i theta P / 2)`.
    pub fn pauli_rotation(axis: PauliAxis, theta: f64) -> Mat2 {
        match axis {
            PauliAxis::X => Mat2::rx(theta),
            PauliAxis::Y => Mat2::ry(theta),
            PauliAxis::Z => Mat2::rz(theta),
        }
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[C64::ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    pub fn dagger(&self) -> Mat2 {
        let a = &self.0;
        Mat2::new(a[0][0].conj(), a[1][0].conj(), a[0][1].conj(), a[1][1].conj())
    }

    /// Max-norm of `U U^dagger - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.mul(&self.dagger());
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { C64::ONE } else { C64::ZERO };
                dev = dev.max((p.0[i][j] - expect).norm());
            }
        }
        dev
    }

    /// Max-norm distance to `other` after aligning global phase, i.e. the
    /// smallest max-norm of `self - e^{i phi} other` over phases phi.
    pub fn phase_distance(&self, other: &Mat2) -> f64 {
        // Align on the largest entry of `other`.
        let mut best = (0, 0);
        let mut mag = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                if other.0[i][j].norm() > mag {
                    mag = other.0[i][j].norm();
                    best = (i, j);
                }
            }
        }
        if mag < 1e-12 {
            return f64::INFINITY;
        }
        let phase = self.0[best.0][best.1] / other.0[best.0][best.1];
        let phase = if phase.norm() < 1e-12 {
            C64::ONE
        } else {
            phase / phase.norm()
        };
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                dev = dev.max((self.0[i][j] - phase * other.0[i][j]).norm());
            }
        }
        dev
    }
}

/// Pauli axis label for rotations and noise insertions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn name(self) -> &'static str {
        match self {
            PauliAxis::X => "x",
            PauliAxis::Y => "y",
            PauliAxis::Z => "z",
        }
    }
}
