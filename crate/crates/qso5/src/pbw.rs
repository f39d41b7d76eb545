//! Generic sparse straightening engine.
//!
//! An algebra is described by a [`Presentation`]: an ordered list of
//! generators, per-generator invertibility flags, and a rule table giving
//! the normal form of `X_j * X_i` for every out-of-order pair `j > i`
//! (including pairs of inverse letters once a generator is localized).
//! Elements are finite `Q(q)`-linear combinations of ordered monomials
//! `X_1^{a_1} ... X_n^{a_n}`; negative exponents are only allowed on
//! invertible generators.
//!
//! Rewriting works on words of single letters: the first (or last, under
//! the alternative strategy) adjacent violation is replaced using the rule
//! table until the word is sorted. A fuel bound turns any non-terminating
//! rule set into a reported error instead of a hang. Products of normal
//! monomials are memoized per presentation; the cache is a pure function
//! cache behind a mutex, so results never depend on thread interleaving.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::ratq::RatQ;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbwError {
    #[error("negative power of non-invertible generator {0}")]
    NonInvertibleNegativePower(String),
    #[error("no straightening rule for {0}*{1}")]
    MissingRule(String, String),
    #[error("rewriting fuel exhausted (non-terminating rule set?)")]
    FuelExhausted,
    #[error("cannot derive inverse straightening rule for {0} past {1}")]
    UnderivableInverseRule(String, String),
    #[error("generator index {0} out of range")]
    BadGenerator(usize),
    #[error("generator {0} is already invertible")]
    AlreadyInvertible(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("products {0} and {1} do not q-commute")]
    NotQCommuting(String, String),
}

/// One letter of a word: a generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Self {
        Letter { gen, inv: false }
    }

    pub fn inverse(gen: usize) -> Self {
        Letter { gen, inv: true }
    }

    fn exponent(&self) -> i32 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

/// Exponent vector over the presentation's ordered generators.
///
/// Ordered by graded lexicographic order: total degree (negative exponents
/// counted by absolute value) first, then entrywise comparison.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(Vec<i32>);

impl Mono {
    pub fn one(ngens: usize) -> Self {
        Mono(vec![0; ngens])
    }

    pub fn gen(ngens: usize, g: usize) -> Self {
        Mono::gen_pow(ngens, g, 1)
    }

    pub fn gen_pow(ngens: usize, g: usize, e: i32) -> Self {
        let mut v = vec![0; ngens];
        v[g] = e;
        Mono(v)
    }

    pub fn from_exponents(v: Vec<i32>) -> Self {
        Mono(v)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exponent(&self, g: usize) -> i32 {
        self.0[g]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Total degree: sum of absolute exponents.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e.unsigned_abs() as i64).sum()
    }

    fn to_letters(&self) -> Vec<Letter> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (g, &e) in self.0.iter().enumerate() {
            for _ in 0..e.unsigned_abs() {
                w.push(Letter {
                    gen: g,
                    inv: e < 0,
                });
            }
        }
        w
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse algebra element: finite map from normal monomials to nonzero
/// coefficients, iterated in graded-lex order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elem {
    ngens: usize,
    terms: BTreeMap<Mono, RatQ>,
}

impl Elem {
    pub fn zero(ngens: usize) -> Self {
        Elem {
            ngens,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ngens: usize) -> Self {
        Elem::from_term(Mono::one(ngens), RatQ::one())
    }

    pub fn scalar(ngens: usize, c: RatQ) -> Self {
        Elem::from_term(Mono::one(ngens), c)
    }

    pub fn gen(ngens: usize, g: usize) -> Self {
        Elem::from_term(Mono::gen(ngens, g), RatQ::one())
    }

    pub fn from_term(mono: Mono, coeff: RatQ) -> Self {
        let ngens = mono.exponents().len();
        let mut e = Elem::zero(ngens);
        e.add_term(mono, coeff);
        e
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &RatQ)> {
        self.terms.iter()
    }

    /// Largest monomial in graded-lex order, if nonzero.
    pub fn leading_mono(&self) -> Option<&Mono> {
        self.terms.keys().next_back()
    }

    pub fn coeff(&self, m: &Mono) -> RatQ {
        self.terms.get(m).cloned().unwrap_or_else(RatQ::zero)
    }

    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn constant_coeff(&self) -> RatQ {
        self.coeff(&Mono::one(self.ngens))
    }

    /// The element minus its scalar part.
    pub fn without_constant(&self) -> Elem {
        let mut e = self.clone();
        e.terms.remove(&Mono::one(self.ngens));
        e
    }

    pub fn add_term(&mut self, mono: Mono, coeff: RatQ) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(mono.exponents().len(), self.ngens);
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Elem {
        Elem {
            ngens: self.ngens,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }

    pub fn scale(&self, c: &RatQ) -> Elem {
        if c.is_zero() {
            return Elem::zero(self.ngens);
        }
        Elem {
            ngens: self.ngens,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    /// If the element is `c * 1`, return `c`.
    pub fn as_scalar(&self) -> Option<RatQ> {
        if self.is_zero() {
            return Some(RatQ::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }
}

/// Which adjacent violation to rewrite first. Normal forms must not depend
/// on the choice; the test corpus checks both agree.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

const DEFAULT_FUEL: u64 = 1_000_000;

type RuleKey = (Letter, Letter);

/// A finitely presented algebra with a straightening rule table.
pub struct Presentation {
    gens: Vec<String>,
    invertible: Vec<bool>,
    rules: HashMap<RuleKey, Elem>,
    fuel: u64,
    memo: Mutex<HashMap<(Mono, Mono), Arc<Elem>>>,
    letter_memo: Mutex<HashMap<(Letter, Mono), Arc<Elem>>>,
}

impl Clone for Presentation {
    fn clone(&self) -> Self {
        Presentation {
            gens: self.gens.clone(),
            invertible: self.invertible.clone(),
            rules: self.rules.clone(),
            fuel: self.fuel,
            memo: Mutex::new(HashMap::new()),
            letter_memo: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("gens", &self.gens)
            .field("invertible", &self.invertible)
            .field("rules", &self.rules.len())
            .finish()
    }
}

/// Builder for [`Presentation`]; rules are added as `X_j * X_i = rhs`.
pub struct PresentationBuilder {
    gens: Vec<String>,
    rules: Vec<(usize, usize, Elem)>,
}

impl PresentationBuilder {
    pub fn new(gens: &[&str]) -> Self {
        PresentationBuilder {
            gens: gens.iter().map(|s| s.to_string()).collect(),
            rules: Vec::new(),
        }
    }

    pub fn rule(mut self, j: usize, i: usize, rhs: Elem) -> Self {
        self.rules.push((j, i, rhs));
        self
    }

    pub fn build(self) -> Result<Presentation, PbwError> {
        let n = self.gens.len();
        let invertible = vec![false; n];
        let mut rules = HashMap::new();
        for (j, i, rhs) in self.rules {
            if j >= n || i >= n {
                return Err(PbwError::BadGenerator(j.max(i)));
            }
            if j <= i {
                return Err(PbwError::InvalidRule(format!(
                    "rule must straighten a descent, got ({j}, {i})"
                )));
            }
            if rhs.ngens() != n {
                return Err(PbwError::InvalidRule(
                    "rule right-hand side over wrong generator count".into(),
                ));
            }
            for (m, _) in rhs.terms() {
                if m.exponents().iter().any(|&e| e < 0) {
                    return Err(PbwError::InvalidRule(
                        "negative exponent in rule for non-localized presentation".into(),
                    ));
                }
            }
            rules.insert((Letter::new(j), Letter::new(i)), rhs);
        }
        Ok(Presentation {
            gens: self.gens,
            invertible,
            rules,
            fuel: DEFAULT_FUEL,
            memo: Mutex::new(HashMap::new()),
            letter_memo: Mutex::new(HashMap::new()),
        })
    }
}

impl Presentation {
    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gens
    }

    pub fn gen_name(&self, g: usize) -> &str {
        &self.gens[g]
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }

    pub fn is_invertible(&self, g: usize) -> bool {
        self.invertible[g]
    }

    pub fn one(&self) -> Elem {
        Elem::one(self.ngens())
    }

    pub fn gen_elem(&self, g: usize) -> Elem {
        Elem::gen(self.ngens(), g)
    }

    fn letter_name(&self, l: Letter) -> String {
        if l.inv {
            format!("{}^-1", self.gens[l.gen])
        } else {
            self.gens[l.gen].clone()
        }
    }

    fn validate_mono(&self, m: &Mono) -> Result<(), PbwError> {
        for (g, &e) in m.exponents().iter().enumerate() {
            if e < 0 && !self.invertible[g] {
                return Err(PbwError::NonInvertibleNegativePower(self.gens[g].clone()));
            }
        }
        Ok(())
    }

    /// Normal form of a product of generator powers, via the memoized
    /// product path.
    pub fn normal_form(&self, factors: &[(usize, i32)]) -> Result<Elem, PbwError> {
        let mut acc = self.one();
        for &(g, e) in factors {
            if g >= self.ngens() {
                return Err(PbwError::BadGenerator(g));
            }
            if e < 0 && !self.invertible[g] {
                return Err(PbwError::NonInvertibleNegativePower(self.gens[g].clone()));
            }
            let factor = Elem::from_term(Mono::gen_pow(self.ngens(), g, e), RatQ::one());
            acc = self.multiply(&acc, &factor)?;
        }
        Ok(acc)
    }

    pub fn normal_form_with(
        &self,
        factors: &[(usize, i32)],
        strategy: Strategy,
    ) -> Result<Elem, PbwError> {
        let mut word = Vec::new();
        for &(g, e) in factors {
            if g >= self.ngens() {
                return Err(PbwError::BadGenerator(g));
            }
            if e < 0 && !self.invertible[g] {
                return Err(PbwError::NonInvertibleNegativePower(self.gens[g].clone()));
            }
            for _ in 0..e.unsigned_abs() {
                word.push(Letter {
                    gen: g,
                    inv: e < 0,
                });
            }
        }
        self.nf_word(RatQ::one(), word, strategy)
    }

    /// Core rewriting loop on linear combinations of words.
    fn nf_word(
        &self,
        coeff: RatQ,
        word: Vec<Letter>,
        strategy: Strategy,
    ) -> Result<Elem, PbwError> {
        let mut out = Elem::zero(self.ngens());
        let mut stack = vec![(coeff, word)];
        let mut fuel = self.fuel;
        while let Some((c, w)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            match self.find_violation(&w, strategy) {
                None => {
                    out.add_term(self.mono_of_sorted(&w), c);
                }
                Some(p) => {
                    if fuel == 0 {
                        return Err(PbwError::FuelExhausted);
                    }
                    fuel -= 1;
                    let (a, b) = (w[p], w[p + 1]);
                    if a.gen == b.gen {
                        // X^{±1} X^{∓1} cancels.
                        let mut w2 = Vec::with_capacity(w.len() - 2);
                        w2.extend_from_slice(&w[..p]);
                        w2.extend_from_slice(&w[p + 2..]);
                        stack.push((c, w2));
                    } else {
                        let rhs = self.rules.get(&(a, b)).ok_or_else(|| {
                            PbwError::MissingRule(self.letter_name(a), self.letter_name(b))
                        })?;
                        for (m, cm) in rhs.terms() {
                            let mid = m.to_letters();
                            let mut w2 = Vec::with_capacity(w.len() - 2 + mid.len());
                            w2.extend_from_slice(&w[..p]);
                            w2.extend(mid);
                            w2.extend_from_slice(&w[p + 2..]);
                            stack.push((&c * cm, w2));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// An adjacent pair is a violation if it is a descent (`gen` strictly
    /// decreasing) or a cancelling pair of a generator and its inverse.
    fn find_violation(&self, w: &[Letter], strategy: Strategy) -> Option<usize> {
        let is_violation = |p: usize| {
            let (a, b) = (w[p], w[p + 1]);
            a.gen > b.gen || (a.gen == b.gen && a.inv != b.inv)
        };
        match strategy {
            Strategy::Leftmost => (0..w.len().saturating_sub(1)).find(|&p| is_violation(p)),
            Strategy::Rightmost => {
                (0..w.len().saturating_sub(1)).rev().find(|&p| is_violation(p))
            }
        }
    }

    fn mono_of_sorted(&self, w: &[Letter]) -> Mono {
        let mut v = vec![0i32; self.ngens()];
        for l in w {
            v[l.gen] += l.exponent();
        }
        Mono(v)
    }

    /// Memoized product of two normal monomials.
    pub fn mul_mono(&self, a: &Mono, b: &Mono) -> Result<Arc<Elem>, PbwError> {
        self.validate_mono(a)?;
        self.validate_mono(b)?;
        let mut fuel = self.fuel;
        self.mul_mono_memo(a, b, &mut fuel)
    }

    /// Product of normal monomials by folding the letters of `a`, right to
    /// left, over `b` through the memoized single-letter product. Repeated
    /// subproblems (a letter crossing a tail monomial) are shared across
    /// all products of the presentation, which keeps the rewriting cost
    /// polynomial where the word-at-a-time strategy branches exponentially.
    fn mul_mono_memo(
        &self,
        a: &Mono,
        b: &Mono,
        fuel: &mut u64,
    ) -> Result<Arc<Elem>, PbwError> {
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let mut acc = Elem::from_term(b.clone(), RatQ::one());
        for u in a.to_letters().into_iter().rev() {
            let mut next = Elem::zero(self.ngens());
            for (m, c) in acc.terms() {
                let part = self.lmul(u, m, fuel)?;
                for (pm, pc) in part.terms() {
                    next.add_term(pm.clone(), c * pc);
                }
            }
            acc = next;
        }
        let result = Arc::new(acc);
        self.memo.lock().unwrap().insert(key, result.clone());
        Ok(result)
    }

    /// Normal form of `letter * monomial`, memoized.
    fn lmul(&self, u: Letter, m: &Mono, fuel: &mut u64) -> Result<Arc<Elem>, PbwError> {
        let key = (u, m.clone());
        if let Some(hit) = self.letter_memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        if *fuel == 0 {
            return Err(PbwError::FuelExhausted);
        }
        *fuel -= 1;
        let first = m.exponents().iter().position(|&e| e != 0);
        let result = match first {
            // Prepending to 1, or to a monomial whose leading generator is
            // not smaller, just merges exponents (powers of one generator
            // always combine, including with the inverse).
            None => Elem::from_term(
                Mono::gen_pow(self.ngens(), u.gen, u.exponent()),
                RatQ::one(),
            ),
            Some(i) if u.gen <= i => {
                let mut v = m.exponents().to_vec();
                v[u.gen] += u.exponent();
                Elem::from_term(Mono::from_exponents(v), RatQ::one())
            }
            Some(i) => {
                let lead = Letter {
                    gen: i,
                    inv: m.exponent(i) < 0,
                };
                let rhs = self
                    .rules
                    .get(&(u, lead))
                    .ok_or_else(|| {
                        PbwError::MissingRule(self.letter_name(u), self.letter_name(lead))
                    })?
                    .clone();
                let mut rest = m.exponents().to_vec();
                rest[i] -= lead.exponent();
                let rest = Mono::from_exponents(rest);
                let mut out = Elem::zero(self.ngens());
                for (r, cr) in rhs.terms() {
                    let part = self.mul_mono_memo(r, &rest, fuel)?;
                    for (pm, pc) in part.terms() {
                        out.add_term(pm.clone(), cr * pc);
                    }
                }
                out
            }
        };
        let result = Arc::new(result);
        self.letter_memo.lock().unwrap().insert(key, result.clone());
        Ok(result)
    }

    /// Single-pass product through the word rewriter, bypassing all memo
    /// caches; the independent slow path used by the confluence oracles.
    pub fn mul_mono_uncached(
        &self,
        a: &Mono,
        b: &Mono,
        strategy: Strategy,
    ) -> Result<Elem, PbwError> {
        self.validate_mono(a)?;
        self.validate_mono(b)?;
        let mut word = a.to_letters();
        word.extend(b.to_letters());
        self.nf_word(RatQ::one(), word, strategy)
    }

    /// Bilinear product of two elements in normal form.
    pub fn multiply(&self, a: &Elem, b: &Elem) -> Result<Elem, PbwError> {
        let mut out = Elem::zero(self.ngens());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let prod = self.mul_mono(ma, mb)?;
                let c = ca * cb;
                for (m, cm) in prod.terms() {
                    out.add_term(m.clone(), &c * cm);
                }
            }
        }
        Ok(out)
    }

    /// As `multiply`, but bypassing the memo cache with an explicit
    /// strategy; used by the confluence oracles.
    pub fn multiply_with(
        &self,
        a: &Elem,
        b: &Elem,
        strategy: Strategy,
    ) -> Result<Elem, PbwError> {
        let mut out = Elem::zero(self.ngens());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let prod = self.mul_mono_uncached(ma, mb, strategy)?;
                let c = ca * cb;
                for (m, cm) in prod.terms() {
                    out.add_term(m.clone(), &c * cm);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, a: &Elem, b: &Elem) -> Result<Elem, PbwError> {
        Ok(self.multiply(a, b)?.sub(&self.multiply(b, a)?))
    }

    /// Nonnegative power of an element.
    pub fn pow(&self, a: &Elem, e: u32) -> Result<Elem, PbwError> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// Scalar `lambda` such that `a = lambda * b`, if one exists.
    pub fn proportionality(&self, a: &Elem, b: &Elem) -> Option<RatQ> {
        if b.is_zero() {
            return if a.is_zero() { Some(RatQ::zero()) } else { None };
        }
        let (m, cb) = b.terms().next().unwrap();
        let lambda = a.coeff(m).checked_div(cb).ok()?;
        if a == &b.scale(&lambda) {
            Some(lambda)
        } else {
            None
        }
    }

    /// Localize at generator `k`: flag it invertible and derive the
    /// straightening rules for words containing `X_k^{-1}`.
    ///
    /// Each base rule `X_j X_i = lambda X_i X_j + T` is solved for the
    /// quadrant involving the new inverse letter; correction terms `T` are
    /// normalized recursively with the rules derived so far. Pairs of two
    /// inverse letters are only derivable when `T = 0` (a q-commuting
    /// pair); anything else reports `UnderivableInverseRule`.
    pub fn localize(&self, k: usize) -> Result<Presentation, PbwError> {
        if k >= self.ngens() {
            return Err(PbwError::BadGenerator(k));
        }
        if self.invertible[k] {
            return Err(PbwError::AlreadyInvertible(self.gens[k].clone()));
        }
        let mut next = self.clone();
        next.invertible[k] = true;

        let split = |p: &Presentation, j: usize, i: usize| -> Result<(RatQ, Elem), PbwError> {
            let rhs = p
                .rules
                .get(&(Letter::new(j), Letter::new(i)))
                .ok_or_else(|| {
                    PbwError::UnderivableInverseRule(p.gens[j].clone(), p.gens[i].clone())
                })?;
            let sorted = Mono::from_exponents({
                let mut v = vec![0; p.ngens()];
                v[i] = 1;
                v[j] = 1;
                v
            });
            let lambda = rhs.coeff(&sorted);
            if lambda.is_zero() {
                return Err(PbwError::UnderivableInverseRule(
                    p.gens[j].clone(),
                    p.gens[i].clone(),
                ));
            }
            let t = rhs.sub(&Elem::from_term(sorted, lambda.clone()));
            Ok((lambda, t))
        };

        // sandwich(p, l, t, r) = nf(l * t * r) with the partial rule set.
        let sandwich = |p: &Presentation,
                        left: Letter,
                        t: &Elem,
                        right: Letter|
         -> Result<Elem, PbwError> {
            let mut out = Elem::zero(p.ngens());
            for (m, c) in t.terms() {
                let mut w = vec![left];
                w.extend(m.to_letters());
                w.push(right);
                let nf = p.nf_word(c.clone(), w, Strategy::Leftmost)?;
                out = out.add(&nf);
            }
            Ok(out)
        };

        let kinv = Letter::inverse(k);
        let n = self.ngens();

        // X_k^{-1} past earlier generators, highest first so correction
        // terms only need rules that are already in place.
        for i in (0..k).rev() {
            let (lambda, t) = split(&next, k, i)?;
            let lam_inv = lambda.inv();

            // X_k^{-1} X_i = lambda^{-1} (X_i X_k^{-1} - X_k^{-1} T X_k^{-1})
            let mut v = vec![0; n];
            v[i] = 1;
            v[k] = -1;
            let lead = Elem::from_term(Mono::from_exponents(v), RatQ::one());
            let corr = sandwich(&next, kinv, &t, kinv)?;
            let rhs = lead.sub(&corr).scale(&lam_inv);
            next.rules.insert((kinv, Letter::new(i)), rhs);

            if next.invertible[i] {
                let iinv = Letter::inverse(i);
                // X_k X_i^{-1} = lambda^{-1} (X_i^{-1} X_k - X_i^{-1} T X_i^{-1})
                let mut v = vec![0; n];
                v[i] = -1;
                v[k] = 1;
                let lead = Elem::from_term(Mono::from_exponents(v), RatQ::one());
                let corr = sandwich(&next, iinv, &t, iinv)?;
                let rhs = lead.sub(&corr).scale(&lam_inv);
                next.rules.insert((Letter::new(k), iinv), rhs);

                // X_k^{-1} X_i^{-1}: only for q-commuting pairs.
                if !t.is_zero() {
                    return Err(PbwError::UnderivableInverseRule(
                        format!("{}^-1", self.gens[k]),
                        format!("{}^-1", self.gens[i]),
                    ));
                }
                let mut v = vec![0; n];
                v[i] = -1;
                v[k] = -1;
                let rhs = Elem::from_term(Mono::from_exponents(v), lambda.clone());
                next.rules.insert((kinv, iinv), rhs);
            }
        }

        // Later generators past X_k^{-1}, lowest first.
        for j in (k + 1)..n {
            let (lambda, t) = split(&next, j, k)?;
            let lam_inv = lambda.inv();

            // X_j X_k^{-1} = lambda^{-1} (X_k^{-1} X_j - X_k^{-1} T X_k^{-1})
            let mut v = vec![0; n];
            v[k] = -1;
            v[j] = 1;
            let lead = Elem::from_term(Mono::from_exponents(v), RatQ::one());
            let corr = sandwich(&next, kinv, &t, kinv)?;
            let rhs = lead.sub(&corr).scale(&lam_inv);
            next.rules.insert((Letter::new(j), kinv), rhs);

            if next.invertible[j] {
                if !t.is_zero() {
                    return Err(PbwError::UnderivableInverseRule(
                        format!("{}^-1", self.gens[j]),
                        format!("{}^-1", self.gens[k]),
                    ));
                }
                let mut v = vec![0; n];
                v[k] = -1;
                v[j] = -1;
                let rhs = Elem::from_term(Mono::from_exponents(v), lambda.clone());
                next.rules.insert((Letter::inverse(j), kinv), rhs);
            }
        }

        Ok(next)
    }

    /// Look up the rule for a letter pair, mainly for tests and reports.
    pub fn rule(&self, left: Letter, right: Letter) -> Option<&Elem> {
        self.rules.get(&(left, right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_pow(k: i64) -> RatQ {
        RatQ::q_pow(k)
    }

    /// Two-generator quantum plane: Y X = q^2 X Y.
    fn quantum_plane() -> Presentation {
        let mut rhs = Elem::zero(2);
        rhs.add_term(Mono::from_exponents(vec![1, 1]), q_pow(2));
        PresentationBuilder::new(&["X", "Y"])
            .rule(1, 0, rhs)
            .build()
            .unwrap()
    }

    #[test]
    fn quantum_plane_straightening() {
        let p = quantum_plane();
        // Y^2 X = q^4 X Y^2
        let nf = p.normal_form(&[(1, 2), (0, 1)]).unwrap();
        let mut expect = Elem::zero(2);
        expect.add_term(Mono::from_exponents(vec![1, 2]), q_pow(4));
        assert_eq!(nf, expect);
    }

    #[test]
    fn strategies_agree_on_quantum_plane() {
        let p = quantum_plane();
        let a = p
            .normal_form_with(&[(1, 2), (0, 3), (1, 1)], Strategy::Leftmost)
            .unwrap();
        let b = p
            .normal_form_with(&[(1, 2), (0, 3), (1, 1)], Strategy::Rightmost)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn localization_round_trip() {
        let p = quantum_plane().localize(1).unwrap();
        // Y^{-1} X = q^{-2} X Y^{-1}
        let nf = p.normal_form(&[(1, -1), (0, 1)]).unwrap();
        let mut expect = Elem::zero(2);
        expect.add_term(Mono::from_exponents(vec![1, -1]), q_pow(-2));
        assert_eq!(nf, expect);
        // Y^{-1} (Y X) = X
        let nf = p.normal_form(&[(1, -1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(nf, Elem::gen(2, 0));
        // Y Y^{-1} = 1
        let nf = p.normal_form(&[(1, 1), (1, -1)]).unwrap();
        assert_eq!(nf, p.one());
    }

    #[test]
    fn negative_power_requires_invertible_flag() {
        let p = quantum_plane();
        let err = p.normal_form(&[(1, -1)]).unwrap_err();
        assert_eq!(err, PbwError::NonInvertibleNegativePower("Y".into()));
    }

    #[test]
    fn scalar_multiplication_commutes_with_normal_form() {
        let p = quantum_plane();
        let c = &q_pow(3) + &RatQ::from_int(2);
        let a = p.normal_form(&[(1, 1), (0, 1)]).unwrap();
        assert_eq!(a.scale(&c), p.multiply(&Elem::scalar(2, c), &a).unwrap());
    }

    #[test]
    fn proportionality_detects_scalar_multiples() {
        let p = quantum_plane();
        let xy = p.normal_form(&[(0, 1), (1, 1)]).unwrap();
        let yx = p.normal_form(&[(1, 1), (0, 1)]).unwrap();
        assert_eq!(p.proportionality(&yx, &xy), Some(q_pow(2)));
        let sum = xy.add(&p.one());
        assert_eq!(p.proportionality(&sum, &xy), None);
    }
}
