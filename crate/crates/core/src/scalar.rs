//! Exact scalars: rationals, prime fields of characteristic at least 5, and
//! quadratic extensions `K[θ]/(θ² − d)` of either.
//!
//! A [`Scalar`] carries enough information to know its own field, so values
//! can be combined without passing a context around. Mixing values from
//! different fields is a programming error and panics; every public
//! constructor in the crate produces matrices and tensors over a single field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Element of `Z/pZ`, stored reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModInt {
    value: u64,
    modulus: u64,
}

impl ModInt {
    pub fn new(value: i128, modulus: u64) -> Self {
        let m = modulus as i128;
        ModInt {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn add(self, o: Self) -> Self {
        let s = (self.value as u128 + o.value as u128) % self.modulus as u128;
        ModInt { value: s as u64, modulus: self.modulus }
    }

    fn sub(self, o: Self) -> Self {
        let s = (self.value as u128 + self.modulus as u128 - o.value as u128) % self.modulus as u128;
        ModInt { value: s as u64, modulus: self.modulus }
    }

    fn mul(self, o: Self) -> Self {
        let s = (self.value as u128 * o.value as u128) % self.modulus as u128;
        ModInt { value: s as u64, modulus: self.modulus }
    }

    fn neg(self) -> Self {
        ModInt {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = ModInt { value: 1 % self.modulus, modulus: self.modulus };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    fn inv(self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }

    fn is_square(self) -> bool {
        self.value == 0 || self.pow((self.modulus - 1) / 2).value == 1
    }

    /// Tonelli–Shanks.
    fn sqrt(self) -> Option<Self> {
        if self.value == 0 {
            return Some(self);
        }
        if !self.is_square() {
            return None;
        }
        let p = self.modulus;
        let one = ModInt { value: 1, modulus: p };
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let mut z = ModInt { value: 2, modulus: p };
        while z.is_square() {
            z.value += 1;
        }
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow(q.div_ceil(2));
        while t != one {
            let mut i = 0;
            let mut t2 = t;
            while t2 != one {
                t2 = t2.mul(t2);
                i += 1;
            }
            let b = c.pow(1 << (m - i - 1));
            m = i;
            c = b.mul(b);
            t = t.mul(c);
            r = r.mul(b);
        }
        Some(r)
    }
}

/// `re + im·θ` with `θ² = disc`; `re`, `im` and `disc` live in the base field.
#[derive(Clone, Debug)]
pub struct QuadraticElem {
    pub re: Scalar,
    pub im: Scalar,
    pub disc: Scalar,
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Modular(ModInt),
    Quadratic(Box<QuadraticElem>),
}

/// Description of the field a scalar lives in.
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Rational,
    Prime(u64),
    /// `base[θ]/(θ² − disc)` with `disc` a non-square of `base`.
    Quadratic { base: Box<Field>, disc: Scalar },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Prime field `F_p`; only odd primes `p ≥ 5` are accepted.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 5 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime >= 5")));
        }
        if p >= 1 << 62 {
            return Err(Error::InvalidField(format!("{p} is too large")));
        }
        Ok(Field::Prime(p))
    }

    /// The extension `base(√disc)`. Fails when `disc` is already a square.
    pub fn quadratic(base: &Field, disc: Scalar) -> Result<Field> {
        if matches!(base, Field::Quadratic { .. }) {
            return Err(Error::InvalidField("towers of height > 1 are not supported".into()));
        }
        if !base.contains(&disc) {
            return Err(Error::InvalidField("discriminant outside the base field".into()));
        }
        if disc.is_zero() || disc.sqrt().is_some() {
            return Err(Error::InvalidField(format!("{disc} is a square in the base field")));
        }
        Ok(Field::Quadratic {
            base: Box::new(base.clone()),
            disc,
        })
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Modular(ModInt::new(n as i128, *p)),
            Field::Quadratic { base, disc } => Scalar::Quadratic(Box::new(QuadraticElem {
                re: base.from_i64(n),
                im: base.zero(),
                disc: disc.clone(),
            })),
        }
    }

    /// Image of a rational number. Fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = q.numer().mod_floor(&pb).to_i128().unwrap_or(0);
                let den = q.denom().mod_floor(&pb).to_i128().unwrap_or(0);
                let den = ModInt::new(den, *p)
                    .inv()
                    .ok_or_else(|| Error::Parse(format!("{q} has a denominator divisible by {p}")))?;
                Ok(Scalar::Modular(ModInt::new(num, *p).mul(den)))
            }
            Field::Quadratic { base, .. } => {
                let re = base.from_rational(q)?;
                Ok(self.embed(&re))
            }
        }
    }

    /// Build `re + im·θ` in a quadratic field, or return `re` for a base field
    /// (in which case `im` must be zero).
    pub fn element(&self, re: Scalar, im: Scalar) -> Scalar {
        match self {
            Field::Quadratic { disc, .. } => Scalar::Quadratic(Box::new(QuadraticElem {
                re,
                im,
                disc: disc.clone(),
            })),
            _ => {
                assert!(im.is_zero(), "imaginary part in a base field");
                re
            }
        }
    }

    /// Embed a base-field value into this field.
    pub fn embed(&self, x: &Scalar) -> Scalar {
        match (self, x) {
            (Field::Quadratic { base, disc }, Scalar::Rational(_) | Scalar::Modular(_)) => {
                Scalar::Quadratic(Box::new(QuadraticElem {
                    re: x.clone(),
                    im: base.zero(),
                    disc: disc.clone(),
                }))
            }
            _ => x.clone(),
        }
    }

    /// Generator `θ` of a quadratic extension.
    pub fn theta(&self) -> Option<Scalar> {
        match self {
            Field::Quadratic { base, disc } => Some(Scalar::Quadratic(Box::new(QuadraticElem {
                re: base.zero(),
                im: base.one(),
                disc: disc.clone(),
            }))),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        match (self, x) {
            (Field::Rational, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Modular(m)) => m.modulus == *p,
            (Field::Quadratic { disc, .. }, Scalar::Quadratic(q)) => &q.disc == disc,
            _ => false,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
            Field::Quadratic { base, .. } => base.characteristic(),
        }
    }

    /// The prime or rational field underneath.
    pub fn base(&self) -> &Field {
        match self {
            Field::Quadratic { base, .. } => base,
            f => f,
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u128> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p as u128),
            Field::Quadratic { base, .. } => base.order().map(|q| q * q),
        }
    }

    /// Short tag used in files and reports: `Q`, `Fp:101`, `Q(sqrt(-3))`.
    pub fn tag(&self) -> String {
        match self {
            Field::Rational => "Q".into(),
            Field::Prime(p) => format!("Fp:{p}"),
            Field::Quadratic { base, disc } => format!("{}(sqrt({}))", base.tag(), disc),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Scalar {
    pub fn rational(num: i64, den: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Modular(m) => Field::Prime(m.modulus),
            Scalar::Quadratic(q) => Field::Quadratic {
                base: Box::new(q.re.field()),
                disc: q.disc.clone(),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular(m) => m.value == 0,
            Scalar::Quadratic(q) => q.re.is_zero() && q.im.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular(m) => m.value == 1,
            Scalar::Quadratic(q) => q.re.is_one() && q.im.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => (!q.is_zero()).then(|| Scalar::Rational(q.recip())),
            Scalar::Modular(m) => m.inv().map(Scalar::Modular),
            Scalar::Quadratic(q) => {
                let norm = self.norm();
                let ninv = norm.inv()?;
                Some(Scalar::Quadratic(Box::new(QuadraticElem {
                    re: &q.re * &ninv,
                    im: -(&q.im * &ninv),
                    disc: q.disc.clone(),
                })))
            }
        }
    }

    /// Field norm down to the base field (identity on base fields).
    pub fn norm(&self) -> Scalar {
        match self {
            Scalar::Quadratic(q) => &(&q.re * &q.re) - &(&(&q.im * &q.im) * &q.disc),
            s => s.clone(),
        }
    }

    /// Galois conjugate `re − im·θ` (identity on base fields).
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Quadratic(q) => Scalar::Quadratic(Box::new(QuadraticElem {
                re: q.re.clone(),
                im: -&q.im,
                disc: q.disc.clone(),
            })),
            s => s.clone(),
        }
    }

    /// Square root inside the same field, when one exists. Only implemented
    /// for base fields; extension elements return `None`.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => rational_sqrt(q).map(Scalar::Rational),
            Scalar::Modular(m) => m.sqrt().map(Scalar::Modular),
            Scalar::Quadratic(_) => None,
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Reduction of a rational modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Scalar> {
        match self {
            Scalar::Rational(q) => Field::prime(p)?.from_rational(q),
            _ => Err(Error::InvalidField("only rationals can be reduced".into())),
        }
    }

    fn lift_pair(a: &Scalar, b: &Scalar) -> (Scalar, Scalar) {
        match (a, b) {
            (Scalar::Quadratic(_), Scalar::Rational(_) | Scalar::Modular(_)) => {
                let f = a.field();
                (a.clone(), f.embed(b))
            }
            (Scalar::Rational(_) | Scalar::Modular(_), Scalar::Quadratic(_)) => {
                let f = b.field();
                (f.embed(a), b.clone())
            }
            _ => (a.clone(), b.clone()),
        }
    }

    fn binop(
        a: &Scalar,
        b: &Scalar,
        rat: fn(&BigRational, &BigRational) -> BigRational,
        md: fn(ModInt, ModInt) -> ModInt,
        quad: fn(&QuadraticElem, &QuadraticElem) -> QuadraticElem,
    ) -> Scalar {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(rat(x, y)),
            (Scalar::Modular(x), Scalar::Modular(y)) => {
                assert_eq!(x.modulus, y.modulus, "field mismatch: F_{} vs F_{}", x.modulus, y.modulus);
                Scalar::Modular(md(*x, *y))
            }
            (Scalar::Quadratic(x), Scalar::Quadratic(y)) => {
                assert!(x.disc == y.disc, "field mismatch: different quadratic extensions");
                Scalar::Quadratic(Box::new(quad(x, y)))
            }
            (Scalar::Quadratic(_), _) | (_, Scalar::Quadratic(_)) => {
                let (x, y) = Scalar::lift_pair(a, b);
                Scalar::binop(&x, &y, rat, md, quad)
            }
            _ => panic!("field mismatch: {} vs {}", a.field(), b.field()),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => x == y,
            (Scalar::Modular(x), Scalar::Modular(y)) => x == y,
            (Scalar::Quadratic(x), Scalar::Quadratic(y)) => {
                x.disc == y.disc && x.re == y.re && x.im == y.im
            }
            (Scalar::Quadratic(x), b) | (b, Scalar::Quadratic(x)) => x.im.is_zero() && &x.re == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::binop(self, rhs, |x, y| x + y, ModInt::add, |x, y| QuadraticElem {
            re: &x.re + &y.re,
            im: &x.im + &y.im,
            disc: x.disc.clone(),
        })
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::binop(self, rhs, |x, y| x - y, ModInt::sub, |x, y| QuadraticElem {
            re: &x.re - &y.re,
            im: &x.im - &y.im,
            disc: x.disc.clone(),
        })
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::binop(self, rhs, |x, y| x * y, ModInt::mul, |x, y| QuadraticElem {
            re: &(&x.re * &y.re) + &(&(&x.im * &y.im) * &x.disc),
            im: &(&x.re * &y.im) + &(&x.im * &y.re),
            disc: x.disc.clone(),
        })
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Modular(m) => Scalar::Modular(m.neg()),
            Scalar::Quadratic(q) => Scalar::Quadratic(Box::new(QuadraticElem {
                re: -&q.re,
                im: -&q.im,
                disc: q.disc.clone(),
            })),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular(m) => write!(f, "{}", m.value),
            Scalar::Quadratic(q) => write!(f, "{} + {}*sqrt({})", q.re, q.im, q.disc),
        }
    }
}

/// Parse `"p/q"`, `"p"` or `"-p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let den: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical string for a rational: `p` or `p/q` in lowest terms.
pub fn format_rational(q: &BigRational) -> String {
    Scalar::Rational(q.clone()).to_string()
}
