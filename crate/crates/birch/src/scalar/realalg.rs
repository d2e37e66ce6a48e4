//! Exact real algebraic numbers.
//!
//! A [`NumberField`] is `Q[a]/(m(a))` for a monic squarefree `m`, together
//! with an isolating interval for one real root `theta` of `m`. Elements are
//! residues modulo `m` and denote their value at `theta`. The modulus need
//! not be irreducible: zero tests take `gcd(rep, m)` and, whenever that
//! splits `m`, the field keeps only the factor vanishing at `theta`. Every
//! identity proved on representatives is an identity of real numbers,
//! because evaluation at `theta` is a ring map.
//!
//! Fields built by adjoining roots remember the images of their ancestors'
//! generators, so elements of different fields combine through the smallest
//! known common extension, computed by primitive elements when needed.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, ToPrimitive};

use super::{exact_root, Interval, RealScalar, Scalar, Q};
use crate::error::{Error, Result};
use crate::linalg::charpoly;
use crate::poly::UPoly;

/// Largest field degree the library will build.
pub const MAX_FIELD_DEGREE: usize = 729;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug)]
struct FieldState {
    modulus: UPoly<Q>,
    lo: Q,
    hi: Q,
}

/// A real number field with a chosen real embedding.
#[derive(Debug)]
pub struct NumberField {
    id: u64,
    state: Mutex<FieldState>,
    /// `(ancestor, image of the ancestor's generator)`, transitively closed.
    ancestors: Vec<(Arc<NumberField>, UPoly<Q>)>,
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

impl NumberField {
    fn create(
        modulus: UPoly<Q>,
        lo: Q,
        hi: Q,
        ancestors: Vec<(Arc<NumberField>, UPoly<Q>)>,
    ) -> Arc<NumberField> {
        Arc::new(NumberField {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            state: Mutex::new(FieldState { modulus, lo, hi }),
            ancestors,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// Current modulus; it only ever shrinks to a factor.
    pub fn modulus(&self) -> UPoly<Q> {
        self.state.lock().unwrap().modulus.clone()
    }

    pub fn degree(&self) -> usize {
        self.state.lock().unwrap().modulus.degree().unwrap_or(0)
    }

    /// Isolating interval of the generator with width at most `width`.
    pub fn generator_interval(&self, width: &Q) -> Interval {
        let mut st = self.state.lock().unwrap();
        if &(&st.hi - &st.lo) > width {
            let (lo, hi) = st.modulus.refine_root(&st.lo, &st.hi, width);
            if lo == hi || st.modulus.sign_at(&((&lo + &hi) * half())) == 0 && lo != st.lo {
                // landed on a rational root; keep the enclosure anyway
            }
            st.lo = lo;
            st.hi = hi;
        }
        Interval::new(st.lo.clone(), st.hi.clone())
    }

    fn reduce(&self, p: &UPoly<Q>) -> UPoly<Q> {
        let m = self.modulus();
        p.rem(&m).expect("monic modulus")
    }

    fn mulmod(&self, a: &UPoly<Q>, b: &UPoly<Q>) -> UPoly<Q> {
        self.reduce(&a.mul(b))
    }

    /// `p(image)` reduced modulo this field's modulus.
    fn compose_mod(&self, p: &UPoly<Q>, image: &UPoly<Q>) -> UPoly<Q> {
        let m = self.modulus();
        let mut acc = UPoly::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc
                .mul(image)
                .add(&UPoly::constant(c.clone()))
                .rem(&m)
                .expect("monic");
        }
        acc
    }

    fn image_of(&self, ancestor: &NumberField) -> Option<UPoly<Q>> {
        self.ancestors
            .iter()
            .find(|(a, _)| a.id == ancestor.id)
            .map(|(_, img)| img.clone())
    }

    /// Semantic zero test of a representative at the generator, shrinking
    /// the modulus when the gcd splits it.
    fn rep_is_zero(&self, rep: &UPoly<Q>) -> bool {
        let mut st = self.state.lock().unwrap();
        let r = rep.rem(&st.modulus).expect("monic");
        if r.is_zero() {
            return true;
        }
        let g = r.gcd(&st.modulus).expect("rational gcd");
        if g.degree() == Some(0) {
            return false;
        }
        let at_root = {
            let a = g.sign_at(&st.lo);
            let b = g.sign_at(&st.hi);
            a != b
        };
        if at_root {
            st.modulus = g;
            true
        } else {
            let (quot, _) = st.modulus.div_rem(&g).expect("nonzero");
            st.modulus = quot;
            false
        }
    }
}

/// An exact real algebraic number.
#[derive(Clone)]
pub struct RealAlg {
    field: Option<Arc<NumberField>>,
    rep: UPoly<Q>,
}

type Aligned = (Option<Arc<NumberField>>, UPoly<Q>, UPoly<Q>);

type CompositumCache = Mutex<HashMap<(u64, u64), Arc<NumberField>>>;

fn composita() -> &'static CompositumCache {
    static CACHE: OnceLock<CompositumCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl RealAlg {
    pub fn rational(x: Q) -> Self {
        RealAlg {
            field: None,
            rep: UPoly::constant(x),
        }
    }

    /// Element with representative `rep` in `field`.
    pub fn in_field(field: &Arc<NumberField>, rep: UPoly<Q>) -> Self {
        let rep = field.reduce(&rep);
        RealAlg {
            field: Some(field.clone()),
            rep,
        }
    }

    /// The generator of `field`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        RealAlg::in_field(field, UPoly::x())
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn rep(&self) -> &UPoly<Q> {
        &self.rep
    }

    /// Degree of the ambient field (1 for rationals).
    pub fn field_degree(&self) -> usize {
        self.field.as_ref().map_or(1, |f| f.degree())
    }

    fn embed(&self, target: &Arc<NumberField>) -> Option<UPoly<Q>> {
        match &self.field {
            None => Some(self.rep.clone()),
            Some(f) if f.id == target.id => Some(self.rep.clone()),
            Some(f) => {
                let img = target.image_of(f)?;
                Some(target.compose_mod(&self.rep, &img))
            }
        }
    }

    /// Expresses `self` inside `target`, which must contain its field.
    pub fn embed_into(&self, target: &Arc<NumberField>) -> Option<RealAlg> {
        self.embed(target).map(|rep| RealAlg::in_field(target, rep))
    }

    fn align(&self, other: &RealAlg) -> Aligned {
        match (&self.field, &other.field) {
            (None, None) => (None, self.rep.clone(), other.rep.clone()),
            (Some(f), None) => (Some(f.clone()), self.rep.clone(), other.rep.clone()),
            (None, Some(g)) => (Some(g.clone()), self.rep.clone(), other.rep.clone()),
            (Some(f), Some(g)) => {
                if f.id == g.id {
                    return (Some(f.clone()), self.rep.clone(), other.rep.clone());
                }
                if let Some(b) = other.embed(f) {
                    return (Some(f.clone()), self.rep.clone(), b);
                }
                if let Some(a) = self.embed(g) {
                    return (Some(g.clone()), a, other.rep.clone());
                }
                let l = compositum(f, g).expect("compositum of real number fields");
                let a = self.embed(&l).expect("embeds");
                let b = other.embed(&l).expect("embeds");
                (Some(l), a, b)
            }
        }
    }

    fn from_aligned(field: Option<Arc<NumberField>>, rep: UPoly<Q>) -> RealAlg {
        match field {
            Some(f) => {
                let rep = f.reduce(&rep);
                if rep.degree().unwrap_or(0) == 0 {
                    RealAlg { field: None, rep }
                } else {
                    RealAlg {
                        field: Some(f),
                        rep,
                    }
                }
            }
            None => RealAlg { field: None, rep },
        }
    }

    /// Enclosure of width at most `width`.
    pub fn enclosure_within(&self, width: &Q) -> Interval {
        let Some(f) = &self.field else {
            return Interval::point(self.rep.coeff(0));
        };
        let mut w = width.clone();
        for _ in 0..200 {
            let g = f.generator_interval(&w);
            let v = self.rep.eval_interval(&g).expect("rational coefficients");
            if &v.width() <= width {
                return v;
            }
            w = &w / Q::from_integer(1024.into());
        }
        panic!("enclosure refinement did not converge");
    }

    /// The real root of `poly` isolated by the open interval `(lo, hi)`.
    /// The polynomial must change sign across the interval and have exactly
    /// one root in it.
    pub fn root_in(poly: &UPoly<Q>, lo: &Q, hi: &Q) -> Result<RealAlg> {
        let sf = poly.squarefree_part();
        if sf.count_roots(lo, hi) != 1 || sf.sign_at(lo) == 0 || sf.sign_at(hi) == 0 {
            return Err(Error::contract("interval does not isolate a simple root"));
        }
        if sf.degree() == Some(1) {
            return Ok(RealAlg::rational(-sf.coeff(0) / sf.coeff(1)));
        }
        // cheap rational root check on a small-height approximation
        let (a, b) = sf.refine_root(lo, hi, &Q::new(1.into(), (1u64 << 62).into()));
        let mid = (&a + &b) * half();
        if let Some(r) = super::continued_fraction_reconstruct(&mid, &(1u64 << 24).into()) {
            if sf.sign_at(&r) == 0 && lo < &r && &r < hi {
                return Ok(RealAlg::rational(r));
            }
        }
        let field = NumberField::create(sf, lo.clone(), hi.clone(), Vec::new());
        Ok(RealAlg::generator(&field))
    }

    /// The real `d`-th root of `self` for odd `d`.
    pub fn odd_root(&self, d: u32) -> Result<RealAlg> {
        if d.is_multiple_of(2) {
            return Err(Error::contract("odd_root needs an odd exponent"));
        }
        if d == 1 {
            return Ok(self.clone());
        }
        if let Some(r) = self.as_rational() {
            if let Some(e) = exact_root(&r, d) {
                return Ok(RealAlg::rational(e));
            }
            let mut coeffs = vec![<Q as num_traits::Zero>::zero(); d as usize + 1];
            coeffs[0] = -r.clone();
            coeffs[d as usize] = <Q as num_traits::One>::one();
            let p = UPoly::new(coeffs);
            let b = p.root_bound();
            return RealAlg::root_in(&p, &-b.clone(), &b);
        }
        let mut coeffs = vec![RealAlg::zero(); d as usize + 1];
        coeffs[0] = self.neg();
        coeffs[d as usize] = RealAlg::one();
        let q = UPoly::new(coeffs);
        let bound = self.enclosure_within(&<Q as num_traits::One>::one()).magnitude() + Q::from_integer(2.into());
        RealAlg::adjoin_root(None, &q, &-bound.clone(), &bound)
    }

    /// Adjoins a real root of `q` (coefficients real algebraic) lying in
    /// `(lo, hi)`, where `q` must change sign. Returns the root as an
    /// element of a field containing `base` and every coefficient.
    pub fn adjoin_root(
        base: Option<&Arc<NumberField>>,
        q: &UPoly<RealAlg>,
        lo: &Q,
        hi: &Q,
    ) -> Result<RealAlg> {
        let mut field = base.cloned();
        for c in q.coeffs() {
            let probe = match &field {
                Some(f) => RealAlg::generator(f),
                None => RealAlg::zero(),
            };
            field = probe.align(c).0;
        }
        let Some(field) = field else {
            let qq = UPoly::new(
                q.coeffs()
                    .iter()
                    .map(|c| c.as_rational().expect("rational coefficient"))
                    .collect(),
            );
            let (lo, hi) = isolate_in(&qq, lo, hi)?;
            return RealAlg::root_in(&qq, &lo, &hi);
        };
        let q = UPoly::new(
            q.coeffs()
                .iter()
                .map(|c| c.embed_into(&field).expect("aligned"))
                .collect(),
        )
        .trim_exact();
        let dq = q.derivative();
        let g = q.gcd(&dq).ok_or_else(|| Error::contract("degenerate polynomial"))?;
        let q = if g.degree().unwrap_or(0) > 0 {
            q.div_rem(&g).expect("monic gcd").0
        } else {
            q
        };
        let q = q.monic().ok_or_else(|| Error::contract("zero polynomial"))?;
        let k = q.degree().unwrap_or(0);
        if k == 0 {
            return Err(Error::contract("constant polynomial has no root"));
        }
        if k == 1 {
            return Ok(q.coeff(0).neg());
        }
        let (zlo, zhi) = sign_change_interval(&q, lo, hi)?;
        adjoin_simple(&field, &q, zlo, zhi)
    }

    /// Rational approximation (for diagnostics and numeric seeding).
    pub fn to_f64(&self) -> f64 {
        self.enclosure_within(&Q::new(1.into(), (1u64 << 60).into()))
            .midpoint_f64()
    }

    fn exact_text(&self) -> String {
        match &self.field {
            None => self.rep.coeff(0).to_string(),
            Some(f) => {
                let iv = f.generator_interval(&Q::new(1.into(), (1u64 << 40).into()));
                format!(
                    "alg({}; {}; {}, {})",
                    upoly_text(&self.rep),
                    upoly_text(&f.modulus()),
                    iv.lo(),
                    iv.hi()
                )
            }
        }
    }
}

fn upoly_text(p: &UPoly<Q>) -> String {
    let s = p.to_string();
    s.replace('z', "a")
}

/// Narrows `(lo, hi)` to an interval isolating one root of the rational
/// polynomial `p` that lies in it.
fn isolate_in(p: &UPoly<Q>, lo: &Q, hi: &Q) -> Result<(Q, Q)> {
    let sf = p.squarefree_part();
    for (a, b) in sf.isolate_real_roots() {
        let cand_lo = if &a < lo { lo.clone() } else { a.clone() };
        let cand_hi = if &b > hi { hi.clone() } else { b.clone() };
        if cand_lo < cand_hi
            && sf.sign_at(&cand_lo) != 0
            && sf.sign_at(&cand_hi) != 0
            && sf.count_roots(&cand_lo, &cand_hi) == 1
        {
            return Ok((cand_lo, cand_hi));
        }
    }
    Err(Error::contract("no isolated real root in the interval"))
}

/// Sign of `q(x)` from enclosures of its coefficients.
fn certified_sign(q: &UPoly<RealAlg>, x: &Q) -> Option<i32> {
    let mut w = Q::new(1.into(), (1u64 << 30).into());
    for _ in 0..12 {
        let mut acc = Interval::zero();
        let xi = Interval::point(x.clone());
        for c in q.coeffs().iter().rev() {
            acc = acc.mul(&xi).add(&c.enclosure_within(&w));
        }
        if let Some(s) = acc.sign() {
            if s != 0 {
                return Some(s);
            }
        }
        if q.eval(&RealAlg::rational(x.clone())).is_zero_exact() == Some(true) {
            return Some(0);
        }
        w = &w * &w;
    }
    None
}

fn sign_change_interval(q: &UPoly<RealAlg>, lo: &Q, hi: &Q) -> Result<(Q, Q)> {
    let sl = certified_sign(q, lo);
    let sh = certified_sign(q, hi);
    match (sl, sh) {
        (Some(a), Some(b)) if a != 0 && b != 0 && a != b => Ok((lo.clone(), hi.clone())),
        _ => Err(Error::contract(
            "polynomial does not change sign across the interval",
        )),
    }
}

/// Bisects a sign-changing interval of `q` down to `width`.
fn refine_sign_change(q: &UPoly<RealAlg>, lo: &Q, hi: &Q, width: &Q) -> (Q, Q) {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let slo = certified_sign(q, &lo).expect("certified endpoint");
    while &(&hi - &lo) > width {
        let third = (&hi - &lo) / Q::from_integer(3.into());
        let mut mid = (&lo + &hi) * half();
        let mut s = certified_sign(q, &mid);
        if s.is_none() || s == Some(0) {
            mid = &lo + &third;
            s = certified_sign(q, &mid);
        }
        match s {
            Some(v) if v == slo => lo = mid,
            Some(v) if v != 0 => hi = mid,
            _ => break,
        }
    }
    (lo, hi)
}

/// Multiplication by `gamma = z + c*theta` on `F[z]/(q)`, in the rational
/// basis `theta^i z^j` (index `j*D + i`).
fn gamma_matrix(field: &NumberField, q: &UPoly<RealAlg>, c: &Q) -> Vec<Vec<Q>> {
    let m = field.modulus();
    let d = m.degree().unwrap_or(0);
    let k = q.degree().unwrap_or(0);
    let n = d * k;
    let qc: Vec<UPoly<Q>> = (0..k)
        .map(|l| field.reduce(q.coeff(l).rep()))
        .collect();
    let mut mat = vec![vec![<Q as num_traits::Zero>::zero(); n]; n];
    for j in 0..k {
        for i in 0..d {
            let col = j * d + i;
            // z * theta^i z^j
            let mut theta_i = vec![<Q as num_traits::Zero>::zero(); i + 1];
            theta_i[i] = <Q as num_traits::One>::one();
            let theta_i = UPoly::new(theta_i);
            if j + 1 < k {
                mat[(j + 1) * d + i][col] += <Q as num_traits::One>::one();
            } else {
                for (l, ql) in qc.iter().enumerate() {
                    let prod = field.mulmod(&theta_i, ql);
                    for (a, v) in prod.coeffs().iter().enumerate() {
                        mat[l * d + a][col] -= v;
                    }
                }
            }
            // c * theta * theta^i z^j
            if !c.is_zero() {
                let shifted = field.reduce(&theta_i.mul(&UPoly::x()));
                for (a, v) in shifted.coeffs().iter().enumerate() {
                    mat[j * d + a][col] += c * v;
                }
            }
        }
    }
    mat
}

fn adjoin_simple(field: &Arc<NumberField>, q: &UPoly<RealAlg>, zlo: Q, zhi: Q) -> Result<RealAlg> {
    let d = field.degree();
    let k = q.degree().unwrap_or(0);
    if d * k > MAX_FIELD_DEGREE {
        return Err(Error::unsupported(format!(
            "number field of degree {} exceeds the limit {MAX_FIELD_DEGREE}",
            d * k
        )));
    }
    for c in [1i64, -1, 2, -2, 3, 5, -7, 11] {
        let cq = Q::from_integer(c.into());
        let r = charpoly(&gamma_matrix(field, q, &cq));
        let s = r.squarefree_part();
        // isolate gamma_0 = z_0 + c theta_0
        let mut width = Q::new(1.into(), 1024.into());
        let mut found = None;
        for _ in 0..40 {
            let (a, b) = refine_sign_change(q, &zlo, &zhi, &width);
            let zi = Interval::new(a, b);
            let ti = field.generator_interval(&width);
            let gi = zi.add(&Interval::point(cq.clone()).mul(&ti));
            if s.sign_at(gi.lo()) != 0
                && s.sign_at(gi.hi()) != 0
                && s.count_roots(gi.lo(), gi.hi()) == 1
            {
                found = Some(gi);
                break;
            }
            width = &width * &width;
            if width < Q::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), 4000)) {
                break;
            }
        }
        let Some(gi) = found else { continue };
        let gamma = RealAlg::root_in(&s, gi.lo(), gi.hi())?;
        let Some(l) = gamma.field.clone() else {
            // gamma rational: z and theta are then rational combinations;
            // only possible when the field is trivial, so try another shift
            continue;
        };
        // theta_L: common root of m(X) and q(X, gamma - c X)
        let lift = |p: &UPoly<Q>| -> UPoly<RealAlg> {
            UPoly::new(p.coeffs().iter().map(|v| RealAlg::rational(v.clone())).collect())
        };
        let m_l = lift(&field.modulus());
        let zsub = UPoly::new(vec![gamma.clone(), RealAlg::rational(-cq.clone())]);
        let mut q_l = UPoly::zero();
        for j in (0..=k).rev() {
            let coef = lift(&field.reduce(q.coeff(j).rep()));
            q_l = q_l.mul(&zsub).add(&coef);
        }
        let Some(g) = m_l.gcd(&q_l) else { continue };
        if g.degree() != Some(1) {
            continue;
        }
        let theta_l = g.coeff(0).neg();
        let z_l = gamma.sub(&RealAlg::rational(cq.clone()).mul(&theta_l));
        let theta_rep = theta_l.embed(&l).expect("same field");
        let mut ancestors = vec![(field.clone(), theta_rep.clone())];
        for (a, img) in &field.ancestors {
            ancestors.push((a.clone(), l.compose_mod(img, &theta_rep)));
        }
        let st = l.state.lock().unwrap();
        let new_field = NumberField::create(
            st.modulus.clone(),
            st.lo.clone(),
            st.hi.clone(),
            ancestors,
        );
        drop(st);
        return Ok(RealAlg::in_field(&new_field, z_l.embed(&l).expect("same field")));
    }
    Err(Error::unsupported("could not find a primitive element"))
}

/// A field containing both `f` and `g`, with embeddings of both.
fn compositum(f: &Arc<NumberField>, g: &Arc<NumberField>) -> Result<Arc<NumberField>> {
    let key = (f.id.min(g.id), f.id.max(g.id));
    if let Some(l) = composita().lock().unwrap().get(&key) {
        return Ok(l.clone());
    }
    let iv = g.generator_interval(&Q::new(1.into(), (1u64 << 20).into()));
    let mg = UPoly::new(
        g.modulus()
            .coeffs()
            .iter()
            .map(|c| RealAlg::rational(c.clone()))
            .collect(),
    );
    let z = adjoin_simple(f, &mg, iv.lo().clone(), iv.hi().clone())?;
    let l = z.field.clone().expect("proper extension");
    let zrep = z.rep.clone();
    let mut ancestors = l.ancestors.clone();
    ancestors.push((g.clone(), zrep.clone()));
    for (a, img) in &g.ancestors {
        if ancestors.iter().all(|(b, _)| b.id != a.id) {
            ancestors.push((a.clone(), l.compose_mod(img, &zrep)));
        }
    }
    let st = l.state.lock().unwrap();
    let out = NumberField::create(st.modulus.clone(), st.lo.clone(), st.hi.clone(), ancestors);
    drop(st);
    composita().lock().unwrap().insert(key, out.clone());
    Ok(out)
}

impl fmt::Debug for RealAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact_text())
    }
}

impl fmt::Display for RealAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact_text())
    }
}

impl PartialEq for RealAlg {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero_exact() == Some(true)
    }
}

impl Scalar for RealAlg {
    fn zero() -> Self {
        RealAlg::rational(<Q as num_traits::Zero>::zero())
    }
    fn one() -> Self {
        RealAlg::rational(<Q as num_traits::One>::one())
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        let (f, a, b) = self.align(rhs);
        RealAlg::from_aligned(f, a.add(&b))
    }
    fn sub(&self, rhs: &Self) -> Self {
        let (f, a, b) = self.align(rhs);
        RealAlg::from_aligned(f, a.sub(&b))
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (f, a, b) = self.align(rhs);
        RealAlg::from_aligned(f, a.mul(&b))
    }
    fn neg(&self) -> Self {
        RealAlg {
            field: self.field.clone(),
            rep: self.rep.neg(),
        }
    }
    fn inv(&self) -> Option<Self> {
        match &self.field {
            None => {
                let c = self.rep.coeff(0);
                (!c.is_zero()).then(|| RealAlg::rational(c.recip()))
            }
            Some(f) => {
                if f.rep_is_zero(&self.rep) {
                    return None;
                }
                let m = f.modulus();
                let (g, s, _) = self.rep.ext_gcd(&m)?;
                debug_assert_eq!(g.degree(), Some(0));
                Some(RealAlg::from_aligned(Some(f.clone()), s))
            }
        }
    }
    fn from_rational(value: &Q) -> Self {
        RealAlg::rational(value.clone())
    }
    fn is_zero_exact(&self) -> Option<bool> {
        Some(match &self.field {
            None => self.rep.is_zero(),
            Some(f) => f.rep_is_zero(&self.rep),
        })
    }
    fn as_rational(&self) -> Option<Q> {
        match &self.field {
            None => Some(self.rep.coeff(0)),
            Some(f) => {
                let r = f.reduce(&self.rep);
                (r.degree().unwrap_or(0) == 0).then(|| r.coeff(0))
            }
        }
    }
    fn enclosure(&self) -> Option<Interval> {
        Some(self.enclosure_within(&Q::new(1.into(), (1u64 << 60).into())))
    }
}

impl RealScalar for RealAlg {
    fn signum(&self) -> Option<i32> {
        if self.is_zero_exact() == Some(true) {
            return Some(0);
        }
        let mut w = Q::new(1.into(), (1u64 << 20).into());
        loop {
            if let Some(s) = self.enclosure_within(&w).sign() {
                return Some(s);
            }
            w = &w * &w;
        }
    }

    fn approx(&self) -> f64 {
        self.to_f64()
    }
}

impl RealAlg {
    /// `true` when `self > other`.
    pub fn gt(&self, other: &RealAlg) -> bool {
        self.sub(other).signum() == Some(1)
    }

    pub fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// A rational within `width` of the value.
    pub fn approx_rational(&self, width: &Q) -> Q {
        self.enclosure_within(width).midpoint()
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn to_f64_lossy(x: &Q) -> f64 {
        x.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Some(1)
    }

    pub fn is_negative_value(&self) -> bool {
        self.signum() == Some(-1)
    }

    pub fn magnitude_bound(&self) -> Q {
        self.enclosure_within(&<Q as num_traits::One>::one()).magnitude().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    #[test]
    fn cube_root_arithmetic() {
        let a = RealAlg::rational(qf(2)).odd_root(3).unwrap();
        assert_eq!(a.field_degree(), 3);
        assert_eq!(a.pow(3), RealAlg::rational(qf(2)));
        let inv = a.inv().unwrap();
        assert_eq!(inv.mul(&a), RealAlg::one());
        assert!((a.to_f64() - 2f64.cbrt()).abs() < 1e-12);
        let r = RealAlg::rational(q(-8, 27)).odd_root(3).unwrap();
        assert_eq!(r.as_rational(), Some(q(-2, 3)));
    }

    #[test]
    fn compositum_of_two_radicals() {
        let a = RealAlg::rational(qf(2)).odd_root(3).unwrap();
        let b = RealAlg::rational(qf(3)).odd_root(3).unwrap();
        let s = a.add(&b);
        assert!((s.to_f64() - (2f64.cbrt() + 3f64.cbrt())).abs() < 1e-10);
        assert_eq!(s.sub(&b), a);
        assert_eq!(a.mul(&b).pow(3), RealAlg::rational(qf(6)));
        assert!(s.sub(&a).sub(&b).is_zero_exact().unwrap());
    }

    #[test]
    fn dependent_radicals_shrink() {
        // cbrt(2) and cbrt(16) = 2 cbrt(2) generate the same field
        let a = RealAlg::rational(qf(2)).odd_root(3).unwrap();
        let b = RealAlg::rational(qf(16)).odd_root(3).unwrap();
        let diff = b.sub(&a.mul(&RealAlg::rational(qf(2))));
        assert_eq!(diff.is_zero_exact(), Some(true));
        let quot = b.div(&a).unwrap();
        assert_eq!(quot, RealAlg::rational(qf(2)));
    }

    #[test]
    fn root_of_polynomial_over_a_field() {
        let a = RealAlg::rational(qf(2)).odd_root(3).unwrap();
        // z^3 - a has root 2^(1/9)
        let z = a.odd_root(3).unwrap();
        assert_eq!(z.pow(9), RealAlg::rational(qf(2)));
        assert!((z.to_f64() - 2f64.powf(1.0 / 9.0)).abs() < 1e-10);
        assert_eq!(z.pow(3), a);
    }

    #[test]
    fn signs() {
        let a = RealAlg::rational(qf(2)).odd_root(3).unwrap();
        assert_eq!(a.sub(&RealAlg::rational(q(5, 4))).signum(), Some(1));
        assert_eq!(a.sub(&RealAlg::rational(q(127, 100))).signum(), Some(-1));
    }
}
