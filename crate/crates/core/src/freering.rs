//! Noncommutative polynomials in α, δ and the indexed letters δ_b.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::resfield::{fp, RatFunc};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    /// α
    A,
    /// plain δ
    Dplain,
    /// δ_b, b ≥ 1
    D(u32),
}

impl Letter {
    pub fn code(self) -> u32 {
        match self {
            Letter::A => 0,
            Letter::Dplain => 1,
            Letter::D(b) => 1 + b,
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code().cmp(&other.code())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::A => f.write_str("a"),
            Letter::Dplain => f.write_str("d"),
            Letter::D(b) => write!(f, "d{b}"),
        }
    }
}

/// A word in the letters, read as a composition of operators: the
/// rightmost letter acts first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        FreeWord(letters)
    }

    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FreeWord(v)
    }

    fn push_run(&mut self, letter: Letter, count: u32) {
        self.0.extend(std::iter::repeat_n(letter, count as usize));
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Length first, then lexicographic on letter codes.
impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let run = self.0[i..].iter().take_while(|&&x| x == l).count();
            if !first {
                f.write_str(".")?;
            }
            first = false;
            if run == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Integer combination of words with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FreePoly {
    terms: BTreeMap<FreeWord, i64>,
}

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly::default()
    }

    pub fn one() -> Self {
        Self::word(FreeWord::empty())
    }

    pub fn word(w: FreeWord) -> Self {
        Self::term(w, 1)
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(FreeWord(vec![l]))
    }

    pub fn term(w: FreeWord, c: i64) -> Self {
        let mut p = FreePoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FreeWord, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &FreeWord) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: FreeWord, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &FreePoly) -> FreePoly {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, v) in self.terms() {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Product in the free ring (concatenation of words).
    pub fn mul(&self, other: &FreePoly) -> FreePoly {
        let mut out = FreePoly::zero();
        for (u, a) in self.terms() {
            for (v, b) in other.terms() {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            match (k, c.unsigned_abs()) {
                (0, _) if c < 0 => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if c.unsigned_abs() != 1 {
                write!(f, "{}*", c.unsigned_abs())?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Split a word over {α, δ} into maximal blocks `α^{a_j} δ^{b_j}`.
fn blocks(w: &FreeWord) -> Result<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    let letters = w.letters();
    let mut i = 0;
    loop {
        let mut a = 0;
        while i < letters.len() && letters[i] == Letter::A {
            a += 1;
            i += 1;
        }
        let mut b = 0;
        while i < letters.len() && letters[i] == Letter::Dplain {
            b += 1;
            i += 1;
        }
        if i < letters.len() && matches!(letters[i], Letter::D(_)) {
            return Err(Error::MalformedWord(format!(
                "{w} contains an indexed letter; σ takes words in α and δ"
            )));
        }
        out.push((a, b));
        if i >= letters.len() {
            return Ok(out);
        }
    }
}

/// The map σ on a word `α^{a_1}δ^{b_1}…α^{a_n}δ^{b_n}`:
/// `α^{a_1} δ_{b_1} α^{a_2-1} δ_{b_2} … δ_{b_{n-1}} α^{a_n-1} δ^{b_n}`.
/// Single-block words are returned unchanged.
pub fn sigma_map(w: &FreeWord) -> Result<FreePoly> {
    let bl = blocks(w)?;
    if bl.len() == 1 {
        return Ok(FreePoly::word(w.clone()));
    }
    let n = bl.len();
    let mut out = FreeWord::empty();
    for (j, &(a, b)) in bl.iter().enumerate() {
        let a = if j == 0 {
            a
        } else {
            a.checked_sub(1).ok_or_else(|| {
                Error::MalformedWord(format!("{w}: empty α-block cannot be decremented"))
            })?
        };
        out.push_run(Letter::A, a);
        if j + 1 < n {
            out.0.push(Letter::D(b));
        } else {
            out.push_run(Letter::Dplain, b);
        }
    }
    Ok(FreePoly::word(out))
}

/// σ extended linearly.
pub fn sigma_poly(p: &FreePoly) -> Result<FreePoly> {
    let mut out = FreePoly::zero();
    for (w, c) in p.terms() {
        out = out.add(&sigma_map(w)?.scale(c));
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SPolyMode {
    /// Sum over all arrangements of α's and δ's.
    Definition,
    /// Built from `S_i^i = δ^i`, `S_i^0 = α^i`, `S_{i+1}^{k+1} = α S_i^{k+1} + δ S_i^k`.
    Recursion,
}

/// `S_i^k`: the sum of all words with `i - k` letters α and `k` letters δ.
pub fn s_poly(i: u32, k: u32, mode: SPolyMode) -> Result<FreePoly> {
    if k > i {
        return Err(Error::InvalidIndex(format!("S_{i}^{k} needs k <= i")));
    }
    Ok(match mode {
        SPolyMode::Definition => {
            let mut out = FreePoly::zero();
            arrangements(i - k, k, &mut Vec::new(), &mut out);
            out
        }
        SPolyMode::Recursion => s_poly_rec(i, k),
    })
}

fn arrangements(a: u32, d: u32, prefix: &mut Vec<Letter>, out: &mut FreePoly) {
    if a == 0 && d == 0 {
        out.add_term(FreeWord(prefix.clone()), 1);
        return;
    }
    if a > 0 {
        prefix.push(Letter::A);
        arrangements(a - 1, d, prefix, out);
        prefix.pop();
    }
    if d > 0 {
        prefix.push(Letter::Dplain);
        arrangements(a, d - 1, prefix, out);
        prefix.pop();
    }
}

fn s_poly_rec(i: u32, k: u32) -> FreePoly {
    // row[k] = S_r^k for the current r
    let alpha = FreePoly::letter(Letter::A);
    let delta = FreePoly::letter(Letter::Dplain);
    let mut row: Vec<FreePoly> = vec![FreePoly::one()];
    for r in 0..i {
        let mut next = Vec::with_capacity(r as usize + 2);
        for kk in 0..=r + 1 {
            let base = if kk == r + 1 {
                FreePoly::word(FreeWord(vec![Letter::Dplain; kk as usize]))
            } else if kk == 0 {
                FreePoly::word(FreeWord(vec![Letter::A; r as usize + 1]))
            } else {
                alpha
                    .mul(&row[kk as usize])
                    .add(&delta.mul(&row[kk as usize - 1]))
            };
            next.push(base);
        }
        row = next;
    }
    row.swap_remove(k as usize)
}

/// Concrete operators for the letters α and δ_b on F_p(t).
pub trait Interpretation {
    fn alpha(&self, a: &RatFunc) -> Result<RatFunc>;
    /// The map standing for `δ_b`; errors with `MissingInterpretation`
    /// when it is not supplied.
    fn delta(&self, b: u32, a: &RatFunc) -> Result<RatFunc>;
}

type Op = Box<dyn Fn(&RatFunc) -> Result<RatFunc> + Send + Sync>;

/// An interpretation assembled from closures.
pub struct MapInterpretation {
    alpha: Op,
    deltas: BTreeMap<u32, Op>,
}

impl MapInterpretation {
    pub fn new(alpha: impl Fn(&RatFunc) -> Result<RatFunc> + Send + Sync + 'static) -> Self {
        MapInterpretation {
            alpha: Box::new(alpha),
            deltas: BTreeMap::new(),
        }
    }

    pub fn with_delta(
        mut self,
        b: u32,
        op: impl Fn(&RatFunc) -> Result<RatFunc> + Send + Sync + 'static,
    ) -> Self {
        self.deltas.insert(b, Box::new(op));
        self
    }
}

impl Interpretation for MapInterpretation {
    fn alpha(&self, a: &RatFunc) -> Result<RatFunc> {
        (self.alpha)(a)
    }

    fn delta(&self, b: u32, a: &RatFunc) -> Result<RatFunc> {
        match self.deltas.get(&b) {
            Some(op) => op(a),
            None => Err(Error::MissingInterpretation(format!("d{b}"))),
        }
    }
}

/// Evaluate a word on `a`, applying the rightmost letter first.
pub fn eval_word(w: &FreeWord, interp: &dyn Interpretation, a: &RatFunc) -> Result<RatFunc> {
    let mut x = a.clone();
    for &l in w.letters().iter().rev() {
        if x.is_zero() {
            return Ok(x);
        }
        x = match l {
            Letter::A => interp.alpha(&x)?,
            Letter::D(b) => interp.delta(b, &x)?,
            Letter::Dplain => return Err(Error::MissingInterpretation("d".into())),
        };
    }
    Ok(x)
}

pub fn eval_free(poly: &FreePoly, interp: &dyn Interpretation, a: &RatFunc) -> Result<RatFunc> {
    let p = a.modulus();
    let mut acc = RatFunc::zero(p);
    for (w, c) in poly.terms() {
        let c = fp::reduce(c, p);
        let v = eval_word(w, interp, a)?;
        if c != 0 {
            acc = &acc + &v.scale(c);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resfield::Mobius;

    fn word(s: &str) -> FreeWord {
        FreeWord(
            s.chars()
                .map(|c| match c {
                    'a' => Letter::A,
                    'd' => Letter::Dplain,
                    _ => unreachable!(),
                })
                .collect(),
        )
    }

    #[test]
    fn sigma_examples() {
        let d2 = FreePoly::letter(Letter::D(2));
        assert_eq!(sigma_map(&word("dda")).unwrap(), d2);
        let ad1 = FreePoly::word(FreeWord(vec![Letter::A, Letter::D(1)]));
        assert_eq!(sigma_map(&word("ada")).unwrap(), ad1);
        assert_eq!(sigma_map(&word("aaa")).unwrap(), FreePoly::word(word("aaa")));
        assert!(sigma_map(&FreeWord(vec![Letter::D(1)])).is_err());
    }

    #[test]
    fn sigma_decrements_later_alpha_blocks() {
        // δαδα = α^0 δ α^1 δ α^1 -> δ_1 δ_1
        let out = sigma_map(&word("dada")).unwrap();
        assert_eq!(
            out,
            FreePoly::word(FreeWord(vec![Letter::D(1), Letter::D(1)]))
        );
        // trailing plain δ block survives
        let out = sigma_map(&word("adaad")).unwrap();
        assert_eq!(
            out,
            FreePoly::word(FreeWord(vec![Letter::A, Letter::D(1), Letter::A, Letter::Dplain]))
        );
    }

    #[test]
    fn s_poly_examples() {
        let s21 = s_poly(2, 1, SPolyMode::Recursion).unwrap();
        assert_eq!(s21, FreePoly::word(word("ad")).add(&FreePoly::word(word("da"))));
        assert_eq!(s_poly(3, 3, SPolyMode::Definition).unwrap(), FreePoly::word(word("ddd")));
        assert_eq!(s_poly(4, 0, SPolyMode::Recursion).unwrap(), FreePoly::word(word("aaaa")));
        assert!(matches!(s_poly(2, 3, SPolyMode::Definition), Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn s_poly_modes_agree() {
        for i in 1..=6 {
            for k in 0..=i {
                let d = s_poly(i, k, SPolyMode::Definition).unwrap();
                let r = s_poly(i, k, SPolyMode::Recursion).unwrap();
                assert_eq!(d, r, "S_{i}^{k}");
                let binom = (0..k).fold(1u64, |acc, j| acc * (i - j) as u64 / (j + 1) as u64);
                assert_eq!(d.len() as u64, binom);
            }
        }
    }

    #[test]
    fn pretty_printer() {
        let w = FreeWord(vec![Letter::A, Letter::D(1), Letter::A, Letter::A]);
        assert_eq!(w.to_string(), "a.d1.a^2");
        let p = FreePoly::word(word("ad")).add(&FreePoly::term(word("d"), -2));
        assert_eq!(p.to_string(), "-2*d + a.d");
        assert_eq!(FreePoly::zero().to_string(), "0");
        assert_eq!(FreePoly::one().to_string(), "1");
    }

    #[test]
    fn eval_examples() {
        let p = 5;
        let sigma = Mobius::scaling(p, 2).unwrap();
        let interp = MapInterpretation::new(move |a| Ok(sigma.apply(a)))
            .with_delta(1, |a| Ok(a.derive()));
        let t = RatFunc::t(p);
        let alpha = FreePoly::letter(Letter::A);
        assert_eq!(eval_free(&alpha, &interp, &t).unwrap(), RatFunc::monomial(p, 2, 1));
        let d1 = FreePoly::letter(Letter::D(1));
        let t2 = RatFunc::monomial(p, 1, 2);
        assert_eq!(eval_free(&d1, &interp, &t2).unwrap(), RatFunc::monomial(p, 2, 1));
        let ad1 = FreePoly::word(FreeWord(vec![Letter::A, Letter::D(1)]));
        let d1a = FreePoly::word(FreeWord(vec![Letter::D(1), Letter::A]));
        assert_eq!(
            eval_free(&ad1.add(&d1a), &interp, &t2).unwrap(),
            RatFunc::monomial(p, 2, 1)
        );
        let d3 = FreePoly::letter(Letter::D(3));
        assert!(matches!(
            eval_free(&d3, &interp, &t2),
            Err(Error::MissingInterpretation(_))
        ));
    }
}
