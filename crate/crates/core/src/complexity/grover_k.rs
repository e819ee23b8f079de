//! Closed-form Grover iteration count `k(n) = π/(4·arcsin 2^{−n/2}) − ½`.
//!
//! Evaluated in double-double arithmetic and rounded once, so values that
//! are exact in real arithmetic (`k(1) = ½`, `k(2) = 1`) come out exact.

use std::ops::{Add, Div, Mul, Sub};

#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

const PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};

const SQRT_2: Dd = Dd {
    hi: std::f64::consts::SQRT_2,
    lo: -9.667_293_313_452_913e-17,
};

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, y: Dd) -> Dd {
        self + Dd {
            hi: -y.hi,
            lo: -y.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let p = self.hi * y.hi;
        let e = self.hi.mul_add(y.hi, -p);
        quick_two_sum(p, e + (self.hi * y.lo + self.lo * y.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y * Dd::from(q1);
        let q2 = r.hi / y.hi;
        let r = r - y * Dd::from(q2);
        let q3 = r.hi / y.hi;
        quick_two_sum(q1, q2) + Dd::from(q3)
    }
}

/// Maclaurin series of arcsin, for `0 < x ≤ 1/√2`.
fn asin(x: Dd) -> Dd {
    let x2 = x * x;
    let mut power = x;
    let mut sum = x;
    for k in 0..2000u32 {
        let k = f64::from(k);
        power = power * x2 * Dd::from(2.0 * k + 1.0) / Dd::from(2.0 * k + 2.0);
        let term = power / Dd::from(2.0 * k + 3.0);
        sum = sum + term;
        if term.hi.abs() < 1e-34 * sum.hi.abs() {
            break;
        }
    }
    sum
}

/// Grover iteration count for `2^n` drawers, `n ≥ 1`.
pub fn grover_k(n: usize) -> f64 {
    assert!(n >= 1, "grover_k needs at least one bit");
    let half = (n / 2) as i32;
    let x = if n.is_multiple_of(2) {
        Dd::from(2f64.powi(-half))
    } else {
        SQRT_2 * Dd::from(2f64.powi(-(half + 1)))
    };
    (PI / (Dd::from(4.0) * asin(x)) - Dd::from(0.5)).to_f64()
}
