//! Quantifier-free linear integer arithmetic in negation normal form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// `Σ coeffs[x]·x + c`, zero coefficients never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin {
    pub coeffs: BTreeMap<String, i128>,
    pub c: i128,
}

impl Lin {
    pub fn constant(c: i128) -> Self {
        Lin {
            coeffs: BTreeMap::new(),
            c,
        }
    }

    pub fn var(x: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(x.to_string(), 1);
        Lin { coeffs, c: 0 }
    }

    pub fn coeff(&self, x: &str) -> i128 {
        self.coeffs.get(x).copied().unwrap_or(0)
    }

    pub fn is_const(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Lin) -> Lin {
        let mut out = self.clone();
        for (x, k) in &other.coeffs {
            let e = out.coeffs.entry(x.clone()).or_insert(0);
            *e += k;
            if *e == 0 {
                out.coeffs.remove(x);
            }
        }
        out.c += other.c;
        out
    }

    pub fn sub(&self, other: &Lin) -> Lin {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i128) -> Lin {
        if k == 0 {
            return Lin::constant(0);
        }
        Lin {
            coeffs: self.coeffs.iter().map(|(x, a)| (x.clone(), a * k)).collect(),
            c: self.c * k,
        }
    }

    pub fn plus_const(&self, k: i128) -> Lin {
        let mut out = self.clone();
        out.c += k;
        out
    }

    pub fn without(&self, x: &str) -> Lin {
        let mut out = self.clone();
        out.coeffs.remove(x);
        out
    }

    /// Replace `x` by `e`.
    pub fn substitute(&self, x: &str, e: &Lin) -> Lin {
        match self.coeff(x) {
            0 => self.clone(),
            a => self.without(x).add(&e.scale(a)),
        }
    }

    fn coeff_gcd(&self) -> i128 {
        self.coeffs.values().fold(0, |g, &a| gcd(g, a))
    }

    fn first_sign(&self) -> i128 {
        self.coeffs.values().next().map_or(1, |a| a.signum())
    }

    pub fn eval(&self, env: &HashMap<String, i128>) -> Option<i128> {
        let mut v = self.c;
        for (x, a) in &self.coeffs {
            v += a * env.get(x)?;
        }
        Some(v)
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (x, a) in &self.coeffs {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{a}{x}")?;
        }
        if first || self.c != 0 {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{}", self.c)?;
        }
        Ok(())
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        return a.abs().max(b.abs());
    }
    (a / gcd(a, b) * b).abs()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `t ≤ 0`
    Le(Lin),
    /// `t = 0`
    Eq(Lin),
    /// `t ≠ 0`
    Ne(Lin),
    /// `d | t`, `d > 0`
    Dvd(i128, Lin),
    /// `¬(d | t)`
    NDvd(i128, Lin),
}

impl Atom {
    pub fn lin(&self) -> &Lin {
        match self {
            Atom::Le(l) | Atom::Eq(l) | Atom::Ne(l) | Atom::Dvd(_, l) | Atom::NDvd(_, l) => l,
        }
    }

    pub fn map_lin(&self, f: impl FnOnce(&Lin) -> Lin) -> Atom {
        match self {
            Atom::Le(l) => Atom::Le(f(l)),
            Atom::Eq(l) => Atom::Eq(f(l)),
            Atom::Ne(l) => Atom::Ne(f(l)),
            Atom::Dvd(d, l) => Atom::Dvd(*d, f(l)),
            Atom::NDvd(d, l) => Atom::NDvd(*d, f(l)),
        }
    }

    pub fn negate(&self) -> Atom {
        match self {
            Atom::Le(l) => Atom::Le(l.scale(-1).plus_const(1)),
            Atom::Eq(l) => Atom::Ne(l.clone()),
            Atom::Ne(l) => Atom::Eq(l.clone()),
            Atom::Dvd(d, l) => Atom::NDvd(*d, l.clone()),
            Atom::NDvd(d, l) => Atom::Dvd(*d, l.clone()),
        }
    }

    /// Canonical form: reduced coefficients, positive leading coefficient for
    /// (dis)equalities, symmetric residues for divisibility. Ground atoms
    /// fold to a constant.
    pub fn normalize(self) -> Qf {
        match self {
            Atom::Le(l) => {
                if l.is_const() {
                    return Qf::bool(l.c <= 0);
                }
                let g = l.coeff_gcd();
                if g > 1 {
                    Qf::Atom(Atom::Le(Lin {
                        coeffs: l.coeffs.iter().map(|(x, a)| (x.clone(), a / g)).collect(),
                        c: div_ceil(l.c, g),
                    }))
                } else {
                    Qf::Atom(Atom::Le(l))
                }
            }
            Atom::Eq(l) => normalize_eq(l, true),
            Atom::Ne(l) => normalize_eq(l, false),
            Atom::Dvd(d, l) => normalize_dvd(d, l, true),
            Atom::NDvd(d, l) => normalize_dvd(d, l, false),
        }
    }

    pub fn holds(&self, env: &HashMap<String, i128>) -> Option<bool> {
        let v = self.lin().eval(env)?;
        Some(match self {
            Atom::Le(_) => v <= 0,
            Atom::Eq(_) => v == 0,
            Atom::Ne(_) => v != 0,
            Atom::Dvd(d, _) => v.rem_euclid(*d) == 0,
            Atom::NDvd(d, _) => v.rem_euclid(*d) != 0,
        })
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

fn normalize_eq(l: Lin, is_eq: bool) -> Qf {
    if l.is_const() {
        return Qf::bool((l.c == 0) == is_eq);
    }
    let g = l.coeff_gcd();
    if l.c % g != 0 {
        return Qf::bool(!is_eq);
    }
    let s = l.first_sign();
    let l = Lin {
        coeffs: l.coeffs.iter().map(|(x, a)| (x.clone(), a * s / g)).collect(),
        c: l.c * s / g,
    };
    Qf::Atom(if is_eq { Atom::Eq(l) } else { Atom::Ne(l) })
}

fn sym_residue(v: i128, d: i128) -> i128 {
    let r = v.rem_euclid(d);
    if 2 * r > d {
        r - d
    } else {
        r
    }
}

fn normalize_dvd(d: i128, l: Lin, is_dvd: bool) -> Qf {
    let d = d.abs();
    assert!(d > 0, "zero modulus");
    if d == 1 {
        return Qf::bool(is_dvd);
    }
    let reduce = |l: &Lin| Lin {
        coeffs: l
            .coeffs
            .iter()
            .filter_map(|(x, a)| {
                let r = sym_residue(*a, d);
                (r != 0).then(|| (x.clone(), r))
            })
            .collect(),
        c: sym_residue(l.c, d),
    };
    let mut l = reduce(&l);
    if l.is_const() {
        return Qf::bool((l.c == 0) == is_dvd);
    }
    if l.first_sign() < 0 {
        l = reduce(&l.scale(-1));
    }
    let g = gcd(l.coeff_gcd(), gcd(l.c, d));
    let (d, l) = if g > 1 {
        (
            d / g,
            Lin {
                coeffs: l.coeffs.iter().map(|(x, a)| (x.clone(), a / g)).collect(),
                c: l.c / g,
            },
        )
    } else {
        (d, l)
    };
    if d == 1 {
        return Qf::bool(is_dvd);
    }
    Qf::Atom(if is_dvd { Atom::Dvd(d, l) } else { Atom::NDvd(d, l) })
}

/// Quantifier-free formula in negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qf {
    True,
    False,
    Atom(Atom),
    And(Vec<Qf>),
    Or(Vec<Qf>),
}

impl Qf {
    pub fn bool(b: bool) -> Qf {
        if b {
            Qf::True
        } else {
            Qf::False
        }
    }

    pub fn atom(a: Atom) -> Qf {
        a.normalize()
    }

    pub fn and(parts: impl IntoIterator<Item = Qf>) -> Qf {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Qf::True => {}
                Qf::False => return Qf::False,
                Qf::And(ps) => out.extend(ps),
                p => out.push(p),
            }
        }
        out.sort();
        out.dedup();
        if contradictory(&out) {
            return Qf::False;
        }
        match out.len() {
            0 => Qf::True,
            1 => out.pop().unwrap(),
            _ => Qf::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Qf>) -> Qf {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Qf::False => {}
                Qf::True => return Qf::True,
                Qf::Or(ps) => out.extend(ps),
                p => out.push(p),
            }
        }
        out.sort();
        out.dedup();
        let atoms: Vec<&Atom> = out
            .iter()
            .filter_map(|p| match p {
                Qf::Atom(a) => Some(a),
                _ => None,
            })
            .collect();
        if atoms
            .iter()
            .any(|a| matches!(Qf::atom(a.negate()), Qf::Atom(n) if atoms.contains(&&n)))
        {
            return Qf::True;
        }
        match out.len() {
            0 => Qf::False,
            1 => out.pop().unwrap(),
            _ => Qf::Or(out),
        }
    }

    pub fn negate(&self) -> Qf {
        match self {
            Qf::True => Qf::False,
            Qf::False => Qf::True,
            Qf::Atom(a) => Qf::atom(a.negate()),
            Qf::And(ps) => Qf::or(ps.iter().map(Qf::negate)),
            Qf::Or(ps) => Qf::and(ps.iter().map(Qf::negate)),
        }
    }

    /// Rebuild with every atom replaced.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Qf) -> Qf {
        match self {
            Qf::True | Qf::False => self.clone(),
            Qf::Atom(a) => f(a),
            Qf::And(ps) => {
                let mut out = Vec::with_capacity(ps.len());
                for p in ps {
                    let q = p.map_atoms(f);
                    if q == Qf::False {
                        return Qf::False;
                    }
                    out.push(q);
                }
                Qf::and(out)
            }
            Qf::Or(ps) => {
                let mut out = Vec::with_capacity(ps.len());
                for p in ps {
                    let q = p.map_atoms(f);
                    if q == Qf::True {
                        return Qf::True;
                    }
                    out.push(q);
                }
                Qf::or(out)
            }
        }
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Atom)) {
        match self {
            Qf::True | Qf::False => {}
            Qf::Atom(a) => f(a),
            Qf::And(ps) | Qf::Or(ps) => ps.iter().for_each(|p| p.visit_atoms(f)),
        }
    }

    pub fn mentions(&self, x: &str) -> bool {
        let mut found = false;
        self.visit_atoms(&mut |a| found |= a.lin().coeff(x) != 0);
        found
    }

    pub fn substitute(&self, x: &str, e: &Lin) -> Qf {
        self.map_atoms(&mut |a| {
            if a.lin().coeff(x) == 0 {
                Qf::Atom(a.clone())
            } else {
                Qf::atom(a.map_lin(|l| l.substitute(x, e)))
            }
        })
    }

    pub fn eval(&self, env: &HashMap<String, i128>) -> Option<bool> {
        Some(match self {
            Qf::True => true,
            Qf::False => false,
            Qf::Atom(a) => a.holds(env)?,
            Qf::And(ps) => {
                for p in ps {
                    if !p.eval(env)? {
                        return Some(false);
                    }
                }
                true
            }
            Qf::Or(ps) => {
                for p in ps {
                    if p.eval(env)? {
                        return Some(true);
                    }
                }
                false
            }
        })
    }

    pub fn size(&self) -> usize {
        match self {
            Qf::True | Qf::False | Qf::Atom(_) => 1,
            Qf::And(ps) | Qf::Or(ps) => 1 + ps.iter().map(Qf::size).sum::<usize>(),
        }
    }
}

/// Complementary literals, or two bounds `a·x + c1 ≤ 0` and `-a·x + c2 ≤ 0`
/// with `c1 + c2 > 0`.
fn contradictory(parts: &[Qf]) -> bool {
    let mut bounds: HashMap<&BTreeMap<String, i128>, i128> = HashMap::new();
    for p in parts {
        if let Qf::Atom(a) = p {
            if let Qf::Atom(n) = Qf::atom(a.negate()) {
                if parts.binary_search(&Qf::Atom(n)).is_ok() {
                    return true;
                }
            }
            if let Atom::Le(l) = a {
                let e = bounds.entry(&l.coeffs).or_insert(l.c);
                *e = (*e).max(l.c);
            }
        }
    }
    for (coeffs, c1) in &bounds {
        let neg: BTreeMap<String, i128> = coeffs.iter().map(|(x, a)| (x.clone(), -a)).collect();
        if let Some(c2) = bounds.get(&neg) {
            if c1 + c2 > 0 {
                return true;
            }
        }
    }
    false
}

impl fmt::Display for Qf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Qf::True => f.write_str("true"),
            Qf::False => f.write_str("false"),
            Qf::Atom(Atom::Le(l)) => write!(f, "{l} <= 0"),
            Qf::Atom(Atom::Eq(l)) => write!(f, "{l} = 0"),
            Qf::Atom(Atom::Ne(l)) => write!(f, "{l} != 0"),
            Qf::Atom(Atom::Dvd(d, l)) => write!(f, "{d} | {l}"),
            Qf::Atom(Atom::NDvd(d, l)) => write!(f, "{d} !| {l}"),
            Qf::And(ps) | Qf::Or(ps) => {
                let op = if matches!(self, Qf::And(_)) { " & " } else { " | " };
                f.write_str("(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(terms: &[(&str, i128)], c: i128) -> Lin {
        Lin {
            coeffs: terms.iter().map(|(x, a)| (x.to_string(), *a)).collect(),
            c,
        }
    }

    #[test]
    fn le_divides_by_gcd_with_ceiling() {
        // 2x + 3 <= 0  <=>  x <= -2  <=>  x + 2 <= 0
        assert_eq!(
            Qf::atom(Atom::Le(lin(&[("x", 2)], 3))),
            Qf::Atom(Atom::Le(lin(&[("x", 1)], 2)))
        );
    }

    #[test]
    fn equality_without_integer_solution_is_false() {
        assert_eq!(Qf::atom(Atom::Eq(lin(&[("x", 2)], 1))), Qf::False);
        assert_eq!(Qf::atom(Atom::Ne(lin(&[("x", 2)], 1))), Qf::True);
        assert_eq!(
            Qf::atom(Atom::Eq(lin(&[("x", -2), ("y", 4)], 2))),
            Qf::Atom(Atom::Eq(lin(&[("x", 1), ("y", -2)], -1)))
        );
    }

    #[test]
    fn divisibility_canonical_form() {
        // 6 | 4x + 2  <=>  3 | 2x + 1  <=>  3 | -x + 1 <=> 3 | x - 1
        assert_eq!(
            Qf::atom(Atom::Dvd(6, lin(&[("x", 4)], 2))),
            Qf::Atom(Atom::Dvd(3, lin(&[("x", 1)], -1)))
        );
        assert_eq!(Qf::atom(Atom::Dvd(3, lin(&[("x", 3)], 6))), Qf::True);
        assert_eq!(Qf::atom(Atom::NDvd(2, lin(&[("x", 2)], 1))), Qf::True);
    }

    #[test]
    fn opposite_bounds_conflict() {
        let up = Qf::atom(Atom::Le(lin(&[("x", 1)], -2))); // x <= 2
        let low = Qf::atom(Atom::Le(lin(&[("x", -1)], 3))); // x >= 3
        assert_eq!(Qf::and([up.clone(), low]), Qf::False);
        let low2 = Qf::atom(Atom::Le(lin(&[("x", -1)], 2))); // x >= 2
        assert_ne!(Qf::and([up, low2]), Qf::False);
    }

    #[test]
    fn negation_round_trip_and_eval() {
        let a = Qf::atom(Atom::Le(lin(&[("x", 1), ("y", -1)], 0)));
        let env: HashMap<String, i128> = [("x".to_string(), 3), ("y".to_string(), 5)].into();
        assert_eq!(a.eval(&env), Some(true));
        assert_eq!(a.negate().eval(&env), Some(false));
        assert_eq!(a.negate().negate(), a);
    }
}
