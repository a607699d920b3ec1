//! Minimal double-double arithmetic for the one place that needs it: the
//! Tricomi-U connection formula, whose two Kummer series cancel like e^z.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd {
            hi: -o.hi,
            lo: -o.lo,
        })
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::new(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::new(q2)));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (hi, lo) = quick_two_sum(s, e + q3);
        Dd { hi, lo }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn new(z: Complex64) -> Self {
        Cdd {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }

    pub fn one() -> Self {
        Cdd {
            re: Dd::new(1.0),
            im: Dd::new(0.0),
        }
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn div(self, o: Cdd) -> Cdd {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let num = self.mul(Cdd {
            re: o.re,
            im: Dd {
                hi: -o.im.hi,
                lo: -o.im.lo,
            },
        });
        Cdd {
            re: num.re.div(den),
            im: num.im.div(den),
        }
    }

    pub fn abs_approx(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_recovers_cancelled_bits() {
        // (1 + 1e-20) - 1 is lost in f64 but survives dd
        let a = Dd::new(1.0).add(Dd::new(1e-20));
        let d = a.sub(Dd::new(1.0));
        assert!((d.value() - 1e-20).abs() < 1e-33);
    }

    #[test]
    fn dd_div_roundtrip() {
        let a = Dd::new(std::f64::consts::PI);
        let b = Dd::new(std::f64::consts::E);
        let q = a.div(b).mul(b);
        assert!((q.value() - std::f64::consts::PI).abs() < 1e-30);
    }

    #[test]
    fn cdd_mul_matches_f64() {
        let x = Complex64::new(1.3, -0.7);
        let y = Complex64::new(0.2, 2.1);
        let z = Cdd::new(x).mul(Cdd::new(y)).value();
        assert!((z - x * y).norm() < 1e-15);
    }
}
