//! Kernel expressions: normalized sums of Smooth, Layer, Boundary and Point
//! terms with matrix-entry spin labels.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use super::KernelError;
use crate::cliffspin::{spin_dim, zeta_generator, SpinMap, UnitOp, Variant};
use crate::paramfield::{qi, AffineExp, GaussianRational, ParamScalar, Substitution, Q};

type G = GaussianRational;

/// Largest ambient dimension handled by the kernel calculus.
pub const KMAX: usize = 8;

/// Exponent vector over `x_1, …, x_n` (unused slots are zero).
pub type Multi = [u8; KMAX];

/// Which kind of value a kernel takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ValueKind {
    Scalar,
    /// `End(S_n)`.
    End,
    /// `Hom(S_n, S_{n-1})`.
    Hom,
}

/// Shape of a single distribution term, without its coefficient.
///
/// `mono` is a monomial prefactor. After normalization it only involves
/// `x'`, has `x_1`-degree at most one, and (for Point terms) is absent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    /// `x'^mono · sgn(x_n)^parity · |x_n|^xn_exp · r^r_exp` with `r = |x'|² + x_n²`.
    Smooth { mono: Multi, parity: u8, xn_exp: AffineExp, r_exp: AffineExp },
    /// `x'^mono · r^r_exp · δ^{(delta_order)}(x_n)`, defined through the finite
    /// jet of `r^r_exp` in `x_n`.
    Layer { mono: Multi, r_exp: AffineExp, delta_order: u32 },
    /// `x'^mono · |x'|^xp_exp · δ^{(delta_order)}(x_n)`.
    Boundary { mono: Multi, xp_exp: AffineExp, delta_order: u32 },
    /// `∂^multi δ(x)`.
    Point { multi: Multi },
}

impl Shape {
    pub fn variant_name(&self) -> &'static str {
        match self {
            Shape::Smooth { .. } => "smooth",
            Shape::Layer { .. } => "layer",
            Shape::Boundary { .. } => "boundary",
            Shape::Point { .. } => "point",
        }
    }

    /// Total homogeneity degree in `x`.
    pub fn degree(&self, n: usize) -> AffineExp {
        match self {
            Shape::Smooth { mono, xn_exp, r_exp, .. } => {
                xn_exp.add(&r_exp.scale(&qi(2))).shift(&qi(multi_deg(mono) as i64))
            }
            Shape::Layer { mono, r_exp, delta_order } => {
                r_exp.scale(&qi(2)).shift(&qi(multi_deg(mono) as i64 - 1 - *delta_order as i64))
            }
            Shape::Boundary { mono, xp_exp, delta_order } => {
                xp_exp.shift(&qi(multi_deg(mono) as i64 - 1 - *delta_order as i64))
            }
            Shape::Point { multi } => AffineExp::constant(qi(-(n as i64) - multi_deg(multi) as i64)),
        }
    }

    /// Behaviour under `x ↦ −x`: `true` for odd.
    pub fn is_odd(&self) -> bool {
        match self {
            Shape::Smooth { mono, parity, .. } => (multi_deg(mono) + *parity as u32) % 2 == 1,
            Shape::Layer { mono, delta_order, .. } | Shape::Boundary { mono, delta_order, .. } => {
                (multi_deg(mono) + delta_order) % 2 == 1
            }
            Shape::Point { multi } => multi_deg(multi) % 2 == 1,
        }
    }

    fn substitute(&self, s: &Substitution) -> Shape {
        match self {
            Shape::Smooth { mono, parity, xn_exp, r_exp } => {
                Shape::Smooth { mono: *mono, parity: *parity, xn_exp: xn_exp.substitute(s), r_exp: r_exp.substitute(s) }
            }
            Shape::Layer { mono, r_exp, delta_order } => {
                Shape::Layer { mono: *mono, r_exp: r_exp.substitute(s), delta_order: *delta_order }
            }
            Shape::Boundary { mono, xp_exp, delta_order } => {
                Shape::Boundary { mono: *mono, xp_exp: xp_exp.substitute(s), delta_order: *delta_order }
            }
            Shape::Point { multi } => Shape::Point { multi: *multi },
        }
    }

    pub(crate) fn mono(&self) -> Option<&Multi> {
        match self {
            Shape::Smooth { mono, .. } | Shape::Layer { mono, .. } | Shape::Boundary { mono, .. } => Some(mono),
            Shape::Point { .. } => None,
        }
    }

    pub(crate) fn with_mono(&self, m: Multi) -> Shape {
        let mut s = self.clone();
        match &mut s {
            Shape::Smooth { mono, .. } | Shape::Layer { mono, .. } | Shape::Boundary { mono, .. } => *mono = m,
            Shape::Point { .. } => {}
        }
        s
    }
}

pub(crate) fn multi_deg(m: &Multi) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

fn fmt_multi(m: &Multi, n: usize) -> String {
    let mut s = String::new();
    for (i, &e) in m.iter().take(n).enumerate() {
        if e > 0 {
            if e == 1 {
                s.push_str(&format!("x{}", i + 1));
            } else {
                s.push_str(&format!("x{}^{}", i + 1, e));
            }
        }
    }
    s
}

/// Sort key of a term: matrix entry (row, column) and shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub spin: (usize, usize),
    pub shape: Shape,
}

/// One term of a kernel expression.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTerm {
    pub coeff: ParamScalar,
    pub spin: (usize, usize),
    pub shape: Shape,
}

/// Tag and parameter constraints carried alongside an expression.
///
/// Each constraint `c` stands for the equation `c(λ, ν) = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KernelMeta {
    pub family: String,
    pub constraints: Vec<AffineExp>,
}

/// Sum of kernel terms in normal form.
#[derive(Clone, Debug)]
pub struct KernelExpr {
    n: usize,
    kind: ValueKind,
    terms: BTreeMap<TermKey, ParamScalar>,
    pub meta: KernelMeta,
}

/// `a + b` for scalars whose Gamma factors may differ by a rational factor.
pub(crate) fn scalar_add(a: &ParamScalar, b: &ParamScalar) -> Result<ParamScalar, KernelError> {
    if let Ok(s) = a.try_add(b) {
        return Ok(s);
    }
    let q = b.div(a).map_err(|e| KernelError::Param(e.to_string()))?;
    if q.has_gammas() {
        return Err(KernelError::GammaMismatch(format!("{a} + {b}")));
    }
    let one_plus = ParamScalar::one().try_add(&q).map_err(|e| KernelError::Param(e.to_string()))?;
    Ok(a.mul(&one_plus))
}

fn falling_factorial(m: u32, p: u32) -> i64 {
    (0..p).map(|t| (m - t) as i64).product()
}

fn ipow(k: u8) -> G {
    G::i().pow((k % 4) as u32)
}

impl KernelExpr {
    pub fn zero(n: usize, kind: ValueKind) -> Self {
        KernelExpr { n, kind, terms: BTreeMap::new(), meta: KernelMeta::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    /// `(rows, columns)` of the matrix values.
    pub fn value_dims(&self) -> (usize, usize) {
        match self.kind {
            ValueKind::Scalar => (1, 1),
            ValueKind::End => (spin_dim(self.n), spin_dim(self.n)),
            ValueKind::Hom => (spin_dim(self.n - 1), spin_dim(self.n)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = KernelTerm> + '_ {
        self.terms.iter().map(|(k, c)| KernelTerm { coeff: c.clone(), spin: k.spin, shape: k.shape.clone() })
    }

    pub fn raw_terms(&self) -> &BTreeMap<TermKey, ParamScalar> {
        &self.terms
    }

    pub fn with_meta(mut self, family: &str, constraints: Vec<AffineExp>) -> Self {
        self.meta = KernelMeta { family: family.to_string(), constraints };
        self
    }

    fn check_shape(&self, shape: &Shape) -> Result<(), KernelError> {
        let bad = |m: &Multi| m.iter().skip(self.n).any(|&e| e != 0);
        let ok = match shape {
            Shape::Point { multi } => !bad(multi),
            other => !bad(other.mono().expect("non-point shape")),
        };
        if ok {
            Ok(())
        } else {
            Err(KernelError::DimensionMismatch(format!("term uses a coordinate beyond x_{}", self.n)))
        }
    }

    /// Add `c · shape` at matrix entry `spin`, normalizing on the way.
    pub fn add_term(&mut self, spin: (usize, usize), shape: Shape, c: ParamScalar) -> Result<(), KernelError> {
        self.check_shape(&shape)?;
        let (rows, cols) = self.value_dims();
        if spin.0 >= rows || spin.1 >= cols {
            return Err(KernelError::DimensionMismatch(format!("entry {spin:?} outside {rows}x{cols}")));
        }
        let mut stack = vec![(shape, c)];
        while let Some((shape, c)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            match self.reduce_step(&shape) {
                None => self.merge(TermKey { spin, shape }, c)?,
                Some(parts) => {
                    for (s, f) in parts {
                        stack.push((s, c.scale(&f)));
                    }
                }
            }
        }
        Ok(())
    }

    fn merge(&mut self, key: TermKey, c: ParamScalar) -> Result<(), KernelError> {
        match self.terms.get(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(old) => {
                let s = scalar_add(old, &c)?;
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    self.terms.insert(key, s);
                }
            }
        }
        Ok(())
    }

    /// One rewriting step towards normal form; `None` if already normal.
    fn reduce_step(&self, shape: &Shape) -> Option<Vec<(Shape, G)>> {
        let n = self.n;
        let last = n - 1;
        let one = G::one();
        match shape {
            Shape::Point { .. } => None,
            Shape::Smooth { mono, parity, xn_exp, r_exp } => {
                if mono[last] > 0 {
                    let p = mono[last];
                    let mut m = *mono;
                    m[last] = 0;
                    return Some(vec![(
                        Shape::Smooth {
                            mono: m,
                            parity: (parity + p) % 2,
                            xn_exp: xn_exp.shift(&qi(p as i64)),
                            r_exp: r_exp.clone(),
                        },
                        one,
                    )]);
                }
                if last >= 1 && mono[0] >= 2 {
                    // x_1² = r − x_n² − Σ_{1<i<n} x_i²
                    let mut m = *mono;
                    m[0] -= 2;
                    let mut out = vec![
                        (
                            Shape::Smooth { mono: m, parity: *parity, xn_exp: xn_exp.clone(), r_exp: r_exp.shift(&Q::one()) },
                            one.clone(),
                        ),
                        (
                            Shape::Smooth { mono: m, parity: *parity, xn_exp: xn_exp.shift(&qi(2)), r_exp: r_exp.clone() },
                            -&one,
                        ),
                    ];
                    for i in 1..last {
                        let mut mi = m;
                        mi[i] += 2;
                        out.push((shape.with_mono(mi), -&one));
                    }
                    return Some(out);
                }
                None
            }
            Shape::Layer { mono, r_exp, delta_order } => {
                if mono[last] > 0 {
                    return Some(delta_rule(shape, mono, last, *delta_order));
                }
                if last >= 1 && mono[0] >= 2 {
                    let mut m = *mono;
                    m[0] -= 2;
                    let mut out = vec![(
                        Shape::Layer { mono: m, r_exp: r_exp.shift(&Q::one()), delta_order: *delta_order },
                        one.clone(),
                    )];
                    let mut mn = m;
                    mn[last] += 2;
                    out.push((shape.with_mono(mn), -&one));
                    for i in 1..last {
                        let mut mi = m;
                        mi[i] += 2;
                        out.push((shape.with_mono(mi), -&one));
                    }
                    return Some(out);
                }
                None
            }
            Shape::Boundary { mono, xp_exp, delta_order } => {
                if mono[last] > 0 {
                    return Some(delta_rule(shape, mono, last, *delta_order));
                }
                if last >= 1 && mono[0] >= 2 {
                    // x_1² = |x'|² − Σ_{1<i<n} x_i²
                    let mut m = *mono;
                    m[0] -= 2;
                    let mut out = vec![(
                        Shape::Boundary { mono: m, xp_exp: xp_exp.shift(&qi(2)), delta_order: *delta_order },
                        one.clone(),
                    )];
                    for i in 1..last {
                        let mut mi = m;
                        mi[i] += 2;
                        out.push((shape.with_mono(mi), -&one));
                    }
                    return Some(out);
                }
                None
            }
        }
    }

    /// Sum of two expressions with matching dimension and value kind.
    pub fn add(&self, o: &KernelExpr) -> Result<KernelExpr, KernelError> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.merge(k.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &KernelExpr) -> Result<KernelExpr, KernelError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> KernelExpr {
        self.map_coeffs(|c| c.neg())
    }

    /// Multiply every coefficient by `s`.
    pub fn scale(&self, s: &ParamScalar) -> KernelExpr {
        if s.is_zero() {
            return KernelExpr { terms: BTreeMap::new(), ..self.clone() };
        }
        self.map_coeffs(|c| c.mul(s))
    }

    fn map_coeffs(&self, f: impl Fn(&ParamScalar) -> ParamScalar) -> KernelExpr {
        let terms = self.terms.iter().map(|(k, c)| (k.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect();
        KernelExpr { n: self.n, kind: self.kind, terms, meta: self.meta.clone() }
    }

    fn check_compatible(&self, o: &KernelExpr) -> Result<(), KernelError> {
        if self.n != o.n || self.kind != o.kind {
            return Err(KernelError::DimensionMismatch(format!(
                "n={} {:?} vs n={} {:?}",
                self.n, self.kind, o.n, o.kind
            )));
        }
        Ok(())
    }

    fn rebuild(&self, kind: ValueKind, items: Vec<(TermKey, ParamScalar)>) -> Result<KernelExpr, KernelError> {
        let mut out = KernelExpr { n: self.n, kind, terms: BTreeMap::new(), meta: self.meta.clone() };
        for (k, c) in items {
            out.add_term(k.spin, k.shape, c)?;
        }
        Ok(out)
    }

    /// Apply an affine substitution of λ, ν to coefficients, exponents and constraints.
    pub fn substitute(&self, s: &Substitution) -> Result<KernelExpr, KernelError> {
        let mut items = Vec::with_capacity(self.terms.len());
        for (k, c) in &self.terms {
            let c = c.substitute(s).map_err(|e| KernelError::Param(e.to_string()))?;
            items.push((TermKey { spin: k.spin, shape: k.shape.substitute(s) }, c));
        }
        let mut out = self.rebuild(self.kind, items)?;
        out.meta.constraints = self.meta.constraints.iter().map(|c| c.substitute(s)).collect();
        Ok(out)
    }

    /// Multiply by the coordinate `x_k` (1-based), with no parameter shift.
    pub fn mult_coordinate(&self, k: usize) -> Result<KernelExpr, KernelError> {
        if k == 0 || k > self.n {
            return Err(KernelError::DimensionMismatch(format!("x_{k} in dimension {}", self.n)));
        }
        let i = k - 1;
        let mut items = Vec::new();
        for (key, c) in &self.terms {
            match &key.shape {
                Shape::Point { multi } => {
                    // x_i ∂^α δ = −α_i ∂^{α−e_i} δ
                    if multi[i] > 0 {
                        let mut m = *multi;
                        m[i] -= 1;
                        items.push((
                            TermKey { spin: key.spin, shape: Shape::Point { multi: m } },
                            c.scale(&G::from_int(-(multi[i] as i64))),
                        ));
                    }
                }
                other => {
                    let mut m = *other.mono().expect("non-point shape");
                    m[i] += 1;
                    items.push((TermKey { spin: key.spin, shape: other.with_mono(m) }, c.clone()));
                }
            }
        }
        self.rebuild(self.kind, items)
    }

    /// Multiply by `|x|²`, with no parameter shift.
    pub fn mult_norm_sq(&self) -> Result<KernelExpr, KernelError> {
        let mut acc = KernelExpr { terms: BTreeMap::new(), ..self.clone() };
        for k in 1..=self.n {
            acc = acc.add(&self.mult_coordinate(k)?.mult_coordinate(k)?)?;
        }
        Ok(acc)
    }

    /// Left-multiply the matrix values by a monomial operator.
    pub fn left_unit(&self, u: &UnitOp) -> Result<KernelExpr, KernelError> {
        let (rows, _) = self.value_dims();
        if u.dim() != rows || self.kind == ValueKind::Scalar {
            return Err(KernelError::DimensionMismatch("left factor does not match the value rows".into()));
        }
        let items = self
            .terms
            .iter()
            .map(|(k, c)| {
                let r = k.spin.0;
                (TermKey { spin: (u.target[r], k.spin.1), shape: k.shape.clone() }, c.scale(&ipow(u.phase[r])))
            })
            .collect();
        self.rebuild(self.kind, items)
    }

    /// Right-multiply the matrix values by a monomial operator.
    pub fn right_unit(&self, u: &UnitOp) -> Result<KernelExpr, KernelError> {
        let (_, cols) = self.value_dims();
        if u.dim() != cols || self.kind == ValueKind::Scalar {
            return Err(KernelError::DimensionMismatch("right factor does not match the value columns".into()));
        }
        let mut inv = vec![0usize; cols];
        for (c, &t) in u.target.iter().enumerate() {
            inv[t] = c;
        }
        let items = self
            .terms
            .iter()
            .map(|(k, c)| {
                let cp = inv[k.spin.1];
                (TermKey { spin: (k.spin.0, cp), shape: k.shape.clone() }, c.scale(&ipow(u.phase[cp])))
            })
            .collect();
        self.rebuild(self.kind, items)
    }

    /// Left-multiply by a general matrix, producing values of `kind`.
    pub fn left_map(&self, m: &SpinMap, kind: ValueKind) -> Result<KernelExpr, KernelError> {
        let (rows, _) = self.value_dims();
        if m.src_dim != rows {
            return Err(KernelError::DimensionMismatch("left matrix does not match the value rows".into()));
        }
        let mut items = Vec::new();
        for (k, c) in &self.terms {
            for s in 0..m.dst_dim {
                let f = m.entry(s, k.spin.0);
                if !f.is_zero() {
                    items.push((TermKey { spin: (s, k.spin.1), shape: k.shape.clone() }, c.scale(f)));
                }
            }
        }
        self.rebuild(kind, items)
    }

    /// View a scalar kernel as `K · id_S`.
    pub fn tensor_identity(&self) -> Result<KernelExpr, KernelError> {
        if self.kind != ValueKind::Scalar {
            return Err(KernelError::DimensionMismatch("expected a scalar kernel".into()));
        }
        let d = spin_dim(self.n);
        let mut items = Vec::new();
        for (k, c) in &self.terms {
            for r in 0..d {
                items.push((TermKey { spin: (r, r), shape: k.shape.clone() }, c.clone()));
            }
        }
        self.rebuild(ValueKind::End, items)
    }

    /// Left-multiply by `ζ(x) = Σ x_i ζ_n(e_i)`, with no parameter shift.
    /// Scalar kernels are first identified with `K · id_S`.
    pub fn mult_clifford_x(&self) -> Result<KernelExpr, KernelError> {
        let base = match self.kind {
            ValueKind::Scalar => self.tensor_identity()?,
            ValueKind::End => self.clone(),
            ValueKind::Hom => {
                return Err(KernelError::DimensionMismatch("ζ(x) cannot act on Hom(S_n, S_(n-1))-valued kernels".into()))
            }
        };
        let mut acc = KernelExpr { terms: BTreeMap::new(), ..base.clone() };
        for k in 1..=self.n {
            let e = zeta_generator(self.n, Variant::Plus, k).map_err(|e| KernelError::DimensionMismatch(e.to_string()))?;
            acc = acc.add(&base.mult_coordinate(k)?.left_unit(&e)?)?;
        }
        Ok(acc)
    }

    /// Rewrite every Layer term as a finite sum of Boundary terms using the
    /// `x_n`-jet of `r^b`.
    pub fn expand_against_delta(&self) -> Result<KernelExpr, KernelError> {
        let mut items = Vec::new();
        for (k, c) in &self.terms {
            match &k.shape {
                Shape::Layer { mono, r_exp, delta_order } => {
                    let m = *delta_order;
                    // r^b = Σ_t C(b,t) |x'|^{2b−2t} x_n^{2t};  x_n^{2t} δ^{(m)} = m!/(m−2t)! δ^{(m−2t)}
                    let mut binom = ParamScalar::one();
                    for t in 0..=(m / 2) {
                        if t > 0 {
                            let f = ParamScalar::from_affine(&r_exp.shift(&qi(-(t as i64) + 1)));
                            binom = binom.mul(&f).scale(&G::from_frac(1, t as i64));
                        }
                        let coeff = binom.scale(&G::from_int(falling_factorial(m, 2 * t))).mul(c);
                        let shape = Shape::Boundary {
                            mono: *mono,
                            xp_exp: r_exp.scale(&qi(2)).shift(&qi(-2 * t as i64)),
                            delta_order: m - 2 * t,
                        };
                        items.push((TermKey { spin: k.spin, shape }, coeff));
                    }
                }
                _ => items.push((k.clone(), c.clone())),
            }
        }
        self.rebuild(self.kind, items)
    }

    /// Equality of the represented distributions: both sides are expanded
    /// against δ and compared term by term. Metadata is ignored.
    pub fn same_kernel(&self, o: &KernelExpr) -> Result<bool, KernelError> {
        Ok(self.kernel_difference(o)?.is_zero())
    }

    /// `self − o` after expansion against δ.
    pub fn kernel_difference(&self, o: &KernelExpr) -> Result<KernelExpr, KernelError> {
        self.expand_against_delta()?.sub(&o.expand_against_delta()?)
    }

    /// Distinct homogeneity degrees occurring among the terms.
    pub fn degrees(&self) -> Vec<AffineExp> {
        let mut v: Vec<AffineExp> = self.terms.keys().map(|k| k.shape.degree(self.n)).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn delta_rule(shape: &Shape, mono: &Multi, last: usize, m: u32) -> Vec<(Shape, G)> {
    // x_n^p δ^{(m)}(x_n) = (−1)^p m!/(m−p)! δ^{(m−p)}(x_n)
    let p = mono[last] as u32;
    if p > m {
        return vec![];
    }
    let mut mm = *mono;
    mm[last] = 0;
    let sign = if p.is_multiple_of(2) { 1 } else { -1 };
    let f = G::from_int(sign * falling_factorial(m, p));
    let s = match shape {
        Shape::Layer { r_exp, .. } => Shape::Layer { mono: mm, r_exp: r_exp.clone(), delta_order: m - p },
        Shape::Boundary { xp_exp, .. } => Shape::Boundary { mono: mm, xp_exp: xp_exp.clone(), delta_order: m - p },
        _ => unreachable!("delta rule only applies to layers"),
    };
    vec![(s, f)]
}

impl PartialEq for KernelExpr {
    fn eq(&self, o: &KernelExpr) -> bool {
        self.n == o.n && self.kind == o.kind && self.terms == o.terms
    }
}

fn fmt_exp(e: &AffineExp) -> String {
    let s = e.to_string();
    if s.contains(['+', '-']) && s.len() > 1 {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for KernelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{}]", c)?;
            if self.kind != ValueKind::Scalar {
                write!(f, "E{},{}", k.spin.0, k.spin.1)?;
            }
            let n = self.n;
            match &k.shape {
                Shape::Smooth { mono, parity, xn_exp, r_exp } => {
                    write!(f, "{}", fmt_multi(mono, n))?;
                    if *parity == 1 {
                        write!(f, "sgn(x{n})")?;
                    }
                    write!(f, "|x{n}|^{}r^{}", fmt_exp(xn_exp), fmt_exp(r_exp))?;
                }
                Shape::Layer { mono, r_exp, delta_order } => {
                    write!(f, "{}r^{}d^({delta_order})(x{n})", fmt_multi(mono, n), fmt_exp(r_exp))?;
                }
                Shape::Boundary { mono, xp_exp, delta_order } => {
                    write!(f, "{}|x'|^{}d^({delta_order})(x{n})", fmt_multi(mono, n), fmt_exp(xp_exp))?;
                }
                Shape::Point { multi } => {
                    let parts: Vec<String> = multi.iter().take(n).map(|e| e.to_string()).collect();
                    write!(f, "D[{}]d(x)", parts.join(","))?;
                }
            }
        }
        Ok(())
    }
}

struct MultiJson<'a>(&'a Multi, usize);

impl Serialize for MultiJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().take(self.1))
    }
}

struct TermJson<'a> {
    n: usize,
    key: &'a TermKey,
    coeff: &'a ParamScalar,
}

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("variant", self.key.shape.variant_name())?;
        m.serialize_entry("coeff", self.coeff)?;
        m.serialize_entry("spin", &[self.key.spin.0, self.key.spin.1])?;
        match &self.key.shape {
            Shape::Smooth { mono, parity, xn_exp, r_exp } => {
                m.serialize_entry("prefactor", &MultiJson(mono, self.n))?;
                let mut ex = BTreeMap::new();
                ex.insert("abs_xn", xn_exp);
                ex.insert("r", r_exp);
                m.serialize_entry("exponents", &ex)?;
                m.serialize_entry("parity", parity)?;
            }
            Shape::Layer { mono, r_exp, delta_order } => {
                m.serialize_entry("prefactor", &MultiJson(mono, self.n))?;
                let mut ex = BTreeMap::new();
                ex.insert("r", r_exp);
                m.serialize_entry("exponents", &ex)?;
                m.serialize_entry("delta_order", delta_order)?;
            }
            Shape::Boundary { mono, xp_exp, delta_order } => {
                m.serialize_entry("prefactor", &MultiJson(mono, self.n))?;
                let mut ex = BTreeMap::new();
                ex.insert("abs_xprime", xp_exp);
                m.serialize_entry("exponents", &ex)?;
                m.serialize_entry("delta_order", delta_order)?;
            }
            Shape::Point { multi } => {
                m.serialize_entry("multi", &MultiJson(multi, self.n))?;
            }
        }
        m.end()
    }
}

impl Serialize for KernelExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self.terms.iter().map(|(key, coeff)| TermJson { n: self.n, key, coeff }).collect();
        let constraints: Vec<String> = self.meta.constraints.iter().map(|c| format!("{c} = 0")).collect();
        let mut st = s.serialize_struct("KernelExpr", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("family", &self.meta.family)?;
        st.serialize_field("constraints", &constraints)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Monomial `x_k` (1-based).
pub fn unit_multi(k: usize) -> Multi {
    let mut m = [0u8; KMAX];
    m[k - 1] = 1;
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu_exp() -> AffineExp {
        AffineExp::nu()
    }

    #[test]
    fn delta_rule_lowers_order() {
        let mut k = KernelExpr::zero(3, ValueKind::Scalar);
        let shape = Shape::Boundary { mono: [0; KMAX], xp_exp: nu_exp(), delta_order: 3 };
        k.add_term((0, 0), shape, ParamScalar::one()).unwrap();
        let x = k.mult_coordinate(3).unwrap();
        let t: Vec<_> = x.terms().collect();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].coeff, ParamScalar::from_int(-3));
        assert!(matches!(t[0].shape, Shape::Boundary { delta_order: 2, .. }));
        let mut d = KernelExpr::zero(3, ValueKind::Scalar);
        d.add_term((0, 0), Shape::Boundary { mono: [0; KMAX], xp_exp: nu_exp(), delta_order: 0 }, ParamScalar::one())
            .unwrap();
        assert!(d.mult_coordinate(3).unwrap().is_zero());
    }

    #[test]
    fn layer_expansion_second_order() {
        let b = AffineExp::nu();
        let mut k = KernelExpr::zero(4, ValueKind::Scalar);
        k.add_term((0, 0), Shape::Layer { mono: [0; KMAX], r_exp: b.clone(), delta_order: 2 }, ParamScalar::one())
            .unwrap();
        let e = k.expand_against_delta().unwrap();
        let mut want = KernelExpr::zero(4, ValueKind::Scalar);
        want.add_term(
            (0, 0),
            Shape::Boundary { mono: [0; KMAX], xp_exp: b.scale(&qi(2)), delta_order: 2 },
            ParamScalar::one(),
        )
        .unwrap();
        want.add_term(
            (0, 0),
            Shape::Boundary { mono: [0; KMAX], xp_exp: b.scale(&qi(2)).shift(&qi(-2)), delta_order: 0 },
            ParamScalar::nu().scale(&G::from_int(2)),
        )
        .unwrap();
        assert_eq!(e, want);
        assert_eq!(e.expand_against_delta().unwrap(), e);
    }

    #[test]
    fn zeta_on_point_terms() {
        let mut d = KernelExpr::zero(4, ValueKind::Scalar);
        d.add_term((0, 0), Shape::Point { multi: [0; KMAX] }, ParamScalar::one()).unwrap();
        assert!(d.mult_clifford_x().unwrap().is_zero());
        let mut dn = KernelExpr::zero(4, ValueKind::Scalar);
        dn.add_term((0, 0), Shape::Point { multi: unit_multi(4) }, ParamScalar::one()).unwrap();
        let z = dn.mult_clifford_x().unwrap();
        let e4 = zeta_generator(4, Variant::Plus, 4).unwrap();
        let mut want = KernelExpr::zero(4, ValueKind::Scalar);
        want.add_term((0, 0), Shape::Point { multi: [0; KMAX] }, ParamScalar::from_int(-1)).unwrap();
        let want = want.tensor_identity().unwrap().left_unit(&e4).unwrap();
        assert_eq!(z, want);
    }

    #[test]
    fn smooth_normal_form_absorbs_norm() {
        // Σ x_i² · r^b |x_n|^a reduces to r^{b+1} |x_n|^a
        let n = 3;
        let mut k = KernelExpr::zero(n, ValueKind::Scalar);
        let shape = Shape::Smooth { mono: [0; KMAX], parity: 0, xn_exp: AffineExp::lambda(), r_exp: AffineExp::nu() };
        k.add_term((0, 0), shape, ParamScalar::one()).unwrap();
        let sq = k.mult_norm_sq().unwrap();
        let mut want = KernelExpr::zero(n, ValueKind::Scalar);
        want.add_term(
            (0, 0),
            Shape::Smooth { mono: [0; KMAX], parity: 0, xn_exp: AffineExp::lambda(), r_exp: AffineExp::nu().shift(&Q::one()) },
            ParamScalar::one(),
        )
        .unwrap();
        assert_eq!(sq, want);
    }
}
