//! Real scalar abstraction shared by the double and multiprecision paths.
//!
//! Most of the library is written once against [`Real`] and instantiated for
//! `f64` (fast, roughly 1e-16 absolute noise) and for [`Hp`], a fixed-precision
//! MPFR float. The multiprecision path exists because the interior behaviour of
//! `p_n` (values like `0.6^256`) is far below double-precision noise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Num, One, Zero};
use rug::float::Constant;
use rug::Float;

/// Complex double.
pub type C64 = Complex<f64>;

/// Working precision of [`Hp`] in bits.
pub const HP_BITS: u32 = 384;

/// Real field operations needed by the generic numerics.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Num
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + RemAssign
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn atan2(&self, x: &Self) -> Self;
    fn abs(&self) -> Self;
    fn pi() -> Self;
    /// Relative rounding unit of the type.
    fn unit_roundoff() -> f64;

    /// `self^e` for positive `self`.
    fn pow_real(&self, e: &Self) -> Self {
        (e.clone() * self.ln()).exp()
    }

    fn pow_int(&self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    /// `self += a·b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a.clone() * b.clone();
    }

    /// `self −= a·b`.
    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        *self -= a.clone() * b.clone();
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }
    fn pow_real(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn pow_int(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
}

/// Multiprecision real with [`HP_BITS`] bits of mantissa.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Hp(pub Float);

impl Hp {
    pub fn new(x: f64) -> Self {
        Hp(Float::with_val(HP_BITS, x))
    }
}

impl fmt::Debug for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.to_string_radix(10, Some(24)))
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! hp_binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for Hp {
            type Output = Hp;
            #[inline]
            fn $m(self, rhs: Hp) -> Hp {
                Hp($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Hp> for Hp {
            type Output = Hp;
            #[inline]
            fn $m(self, rhs: &'a Hp) -> Hp {
                Hp($tr::$m(self.0, &rhs.0))
            }
        }
        impl $atr for Hp {
            #[inline]
            fn $am(&mut self, rhs: Hp) {
                $atr::$am(&mut self.0, rhs.0)
            }
        }
    };
}

hp_binop!(Add, add, AddAssign, add_assign);
hp_binop!(Sub, sub, SubAssign, sub_assign);
hp_binop!(Mul, mul, MulAssign, mul_assign);
hp_binop!(Div, div, DivAssign, div_assign);
hp_binop!(Rem, rem, RemAssign, rem_assign);

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(-self.0)
    }
}

impl Zero for Hp {
    fn zero() -> Self {
        Hp(Float::new(HP_BITS))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Hp {
    fn one() -> Self {
        Hp(Float::with_val(HP_BITS, 1))
    }
}

impl Num for Hp {
    type FromStrRadixErr = rug::float::ParseFloatError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let parsed = Float::parse_radix(s, radix as i32)?;
        Ok(Hp(Float::with_val(HP_BITS, parsed)))
    }
}

impl Real for Hp {
    fn from_f64(x: f64) -> Self {
        Hp::new(x)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn sqrt(&self) -> Self {
        Hp(self.0.clone().sqrt())
    }
    fn exp(&self) -> Self {
        Hp(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        Hp(self.0.clone().ln())
    }
    fn sin(&self) -> Self {
        Hp(self.0.clone().sin())
    }
    fn cos(&self) -> Self {
        Hp(self.0.clone().cos())
    }
    fn atan2(&self, x: &Self) -> Self {
        Hp(self.0.clone().atan2(&x.0))
    }
    fn abs(&self) -> Self {
        Hp(self.0.clone().abs())
    }
    fn pi() -> Self {
        Hp(Float::with_val(HP_BITS, Constant::Pi))
    }
    fn unit_roundoff() -> f64 {
        2f64.powi(-(HP_BITS as i32))
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.0 += &a.0 * &b.0;
    }
    fn mul_sub_assign(&mut self, a: &Self, b: &Self) {
        self.0 -= &a.0 * &b.0;
    }
}

/// Lifts a complex double into `Complex<T>`.
pub fn lift<T: Real>(z: C64) -> Complex<T> {
    Complex::new(T::from_f64(z.re), T::from_f64(z.im))
}

/// Rounds a `Complex<T>` to double precision.
pub fn lower<T: Real>(z: &Complex<T>) -> C64 {
    C64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn cabs<T: Real>(z: &Complex<T>) -> T {
    z.norm_sqr().sqrt()
}

pub fn cexp<T: Real>(z: &Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    Complex::new(m.clone() * z.im.cos(), m * z.im.sin())
}

/// Principal logarithm.
pub fn cln<T: Real>(z: &Complex<T>) -> Complex<T> {
    Complex::new(cabs(z).ln(), z.im.atan2(&z.re))
}

/// Principal power `z^r` for real `r`.
pub fn cpowf<T: Real>(z: &Complex<T>, r: &T) -> Complex<T> {
    cexp(&cln(z).scale(r.clone()))
}

/// Integer power by repeated squaring; exact for small exponents.
pub fn cpowi<T: Real>(z: &Complex<T>, n: i64) -> Complex<T> {
    let mut base = if n < 0 {
        Complex::<T>::one() / z.clone()
    } else {
        z.clone()
    };
    let mut e = n.unsigned_abs();
    let mut acc = Complex::<T>::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

/// `acc += a·b` without temporaries where the scalar allows it.
pub fn cmul_add<T: Real>(acc: &mut Complex<T>, a: &Complex<T>, b: &Complex<T>) {
    acc.re.mul_add_assign(&a.re, &b.re);
    acc.re.mul_sub_assign(&a.im, &b.im);
    acc.im.mul_add_assign(&a.re, &b.im);
    acc.im.mul_add_assign(&a.im, &b.re);
}

/// `acc += a·conj(b)`.
pub fn cmul_conj_add<T: Real>(acc: &mut Complex<T>, a: &Complex<T>, b: &Complex<T>) {
    acc.re.mul_add_assign(&a.re, &b.re);
    acc.re.mul_add_assign(&a.im, &b.im);
    acc.im.mul_add_assign(&a.im, &b.re);
    acc.im.mul_sub_assign(&a.re, &b.im);
}

/// `acc −= a·b`.
pub fn cmul_sub<T: Real>(acc: &mut Complex<T>, a: &Complex<T>, b: &Complex<T>) {
    acc.re.mul_sub_assign(&a.re, &b.re);
    acc.re.mul_add_assign(&a.im, &b.im);
    acc.im.mul_sub_assign(&a.re, &b.im);
    acc.im.mul_sub_assign(&a.im, &b.re);
}

/// `e^{iθ}` for `θ = 2π k / count`.
pub fn root_of_unity<T: Real>(k: usize, count: usize) -> Complex<T> {
    let theta = T::pi() * T::from_usize(2 * k) / T::from_usize(count);
    Complex::new(theta.cos(), theta.sin())
}

/// Total order on finite doubles used for sorting diagnostics.
pub fn cmp_f64(a: &f64, b: &f64) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}
