//! Cooper's quantifier elimination over the integers.

use super::linear::{lcm, Atom, Lin, Qf};

/// A quantifier-free equivalent of `∃x. phi` over ℤ.
pub fn eliminate_exists(x: &str, phi: &Qf) -> Qf {
    match phi {
        _ if !phi.mentions(x) => phi.clone(),
        Qf::Or(ds) => Qf::or(ds.iter().map(|d| eliminate_exists(x, d))),
        Qf::And(cs) => {
            let (with, without): (Vec<&Qf>, Vec<&Qf>) = cs.iter().partition(|c| c.mentions(x));
            let inner = if with.len() == 1 {
                eliminate_exists(x, with[0])
            } else {
                let body = Qf::and(with.into_iter().cloned());
                match solve_equality(x, &body) {
                    Some(q) => q,
                    None => cooper(x, &body),
                }
            };
            Qf::and(without.into_iter().cloned().chain([inner]))
        }
        Qf::Atom(Atom::Eq(l)) => {
            // ∃x. a·x + t = 0  ⟺  a | t
            let a = l.coeff(x);
            Qf::atom(Atom::Dvd(a.abs(), l.without(x)))
        }
        _ => cooper(x, phi),
    }
}

/// Use a top-level equality `c·x + t = 0` to substitute `x` away.
fn solve_equality(x: &str, phi: &Qf) -> Option<Qf> {
    let conj: &[Qf] = match phi {
        Qf::And(cs) => cs,
        other => std::slice::from_ref(other),
    };
    let (idx, eq) = conj
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match c {
            Qf::Atom(Atom::Eq(l)) if l.coeff(x) != 0 => Some((i, l)),
            _ => None,
        })
        .min_by_key(|(_, l)| l.coeff(x).abs())?;
    let c = eq.coeff(x);
    let t = eq.without(x);
    let m = c.abs();
    // m·x = -sign(c)·t
    let mx = t.scale(-c.signum());
    let rewrite = |a: &Atom| -> Qf {
        let k = a.lin().coeff(x);
        if k == 0 {
            return Qf::Atom(a.clone());
        }
        let sub = |l: &Lin| l.without(x).scale(m).add(&mx.scale(k));
        Qf::atom(match a {
            Atom::Dvd(d, l) => Atom::Dvd(d * m, sub(l)),
            Atom::NDvd(d, l) => Atom::NDvd(d * m, sub(l)),
            other => other.map_lin(sub),
        })
    };
    let mut parts = vec![Qf::atom(Atom::Dvd(m, t.clone()))];
    for (i, c) in conj.iter().enumerate() {
        if i != idx {
            parts.push(c.map_atoms(&mut |a| rewrite(a)));
        }
    }
    Some(Qf::and(parts))
}

fn cooper(x: &str, phi: &Qf) -> Qf {
    // Scale every atom so that x has coefficient ±l, then read l·x as x.
    let mut l = 1;
    phi.visit_atoms(&mut |a| {
        let k = a.lin().coeff(x);
        if k != 0 {
            l = lcm(l, k);
        }
    });
    let unit = phi.map_atoms(&mut |a| {
        let k = a.lin().coeff(x);
        if k == 0 {
            return Qf::Atom(a.clone());
        }
        let m = l / k.abs();
        let lift = |lin: &Lin| {
            let mut out = lin.without(x).scale(m);
            out.coeffs.insert(x.to_string(), k.signum());
            out
        };
        Qf::atom(match a {
            Atom::Dvd(d, lin) => Atom::Dvd(d * m, lift(lin)),
            Atom::NDvd(d, lin) => Atom::NDvd(d * m, lift(lin)),
            other => other.map_lin(lift),
        })
    });
    let unit = if l > 1 {
        Qf::and([unit, Qf::atom(Atom::Dvd(l, Lin::var(x)))])
    } else {
        unit
    };

    let mut lower: Vec<Lin> = Vec::new();
    let mut upper: Vec<Lin> = Vec::new();
    let mut delta = 1;
    unit.visit_atoms(&mut |a| {
        let lin = a.lin();
        let k = lin.coeff(x);
        if k == 0 {
            return;
        }
        debug_assert!(k == 1 || k == -1);
        let s = lin.without(x);
        // the value of x that makes the linear part vanish
        let root = s.scale(-k);
        match a {
            Atom::Le(_) if k > 0 => upper.push(root.plus_const(1)),
            Atom::Le(_) => lower.push(root.plus_const(-1)),
            Atom::Eq(_) => {
                lower.push(root.plus_const(-1));
                upper.push(root.plus_const(1));
            }
            Atom::Ne(_) => {
                lower.push(root.clone());
                upper.push(root);
            }
            Atom::Dvd(d, _) | Atom::NDvd(d, _) => delta = lcm(delta, *d),
        }
    });
    lower.sort();
    lower.dedup();
    upper.sort();
    upper.dedup();

    let use_lower = lower.len() <= upper.len();
    let (points, dir) = if use_lower { (lower, 1) } else { (upper, -1) };
    let infinity = unit.map_atoms(&mut |a| {
        let k = a.lin().coeff(x);
        if k == 0 {
            return Qf::Atom(a.clone());
        }
        match a {
            // at -∞ (dir = 1) upper bounds hold and lower bounds fail
            Atom::Le(_) => Qf::bool((k > 0) == (dir > 0)),
            Atom::Eq(_) => Qf::False,
            Atom::Ne(_) => Qf::True,
            _ => Qf::Atom(a.clone()),
        }
    });

    let mut out = Vec::new();
    for j in 1..=delta {
        let q = infinity.substitute(x, &Lin::constant(dir * j));
        if q == Qf::True {
            return Qf::True;
        }
        out.push(q);
    }
    for b in &points {
        for j in 1..=delta {
            let q = unit.substitute(x, &b.plus_const(dir * j));
            if q == Qf::True {
                return Qf::True;
            }
            out.push(q);
        }
    }
    Qf::or(out)
}
