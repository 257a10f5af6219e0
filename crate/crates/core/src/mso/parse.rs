use super::{MsoFormula, Sort};
use crate::logic::{formula_from_sexp, Signature};
use crate::sexp::{self, Sexp};
use crate::{Error, Result};

/// Parse the MSO syntax: `(lt x y)`, `(in x X)`, `(subset X Y)`,
/// `(alpha FORMULA x)`, `(theta FORMULA x…)`, `(existsP x f)`, `(forallP x f)`, `(existsS X f)`,
/// `(forallS X f)` and the boolean connectives. `FORMULA` uses the
/// first-order syntax over `sig`.
pub fn parse_mso(text: &str, sig: &Signature) -> Result<MsoFormula> {
    mso_from_sexp(&sexp::parse(text)?, sig)
}

pub fn mso_from_sexp(s: &Sexp, sig: &Signature) -> Result<MsoFormula> {
    let items = match s {
        Sexp::Atom(a) => {
            return match a.as_str() {
                "true" => Ok(MsoFormula::True),
                "false" => Ok(MsoFormula::False),
                other => Err(Error::parse(format!("expected an MSO formula, found `{other}`"))),
            }
        }
        Sexp::List(items) => items,
    };
    let head = s
        .head()
        .ok_or_else(|| Error::parse(format!("expected an operator in `{s}`")))?;
    let args = &items[1..];
    let expect = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::parse(format!(
                "`{head}` expects {n} arguments, found {} in `{s}`",
                args.len()
            )))
        }
    };
    let var = |x: &Sexp| -> Result<String> {
        x.as_atom()
            .filter(|a| *a != "true" && *a != "false")
            .map(str::to_string)
            .ok_or_else(|| Error::parse(format!("expected a variable, found `{x}`")))
    };
    let sub = |x: &Sexp| mso_from_sexp(x, sig);
    match head {
        "lt" | "in" | "subset" => {
            expect(2)?;
            let (a, b) = (var(&args[0])?, var(&args[1])?);
            Ok(match head {
                "lt" => MsoFormula::Lt(a, b),
                "in" => MsoFormula::In(a, b),
                _ => MsoFormula::Subset(a, b),
            })
        }
        "alpha" => {
            expect(2)?;
            Ok(MsoFormula::Alpha(formula_from_sexp(&args[0], sig)?, var(&args[1])?))
        }
        "theta" => {
            if args.len() < 2 {
                return Err(Error::parse(format!("`theta` needs a formula and positions in `{s}`")));
            }
            let xs = args[1..].iter().map(var).collect::<Result<Vec<_>>>()?;
            Ok(MsoFormula::Theta(formula_from_sexp(&args[0], sig)?, xs))
        }
        "not" => {
            expect(1)?;
            Ok(MsoFormula::not(sub(&args[0])?))
        }
        "and" => Ok(MsoFormula::And(args.iter().map(sub).collect::<Result<_>>()?)),
        "or" => Ok(MsoFormula::Or(args.iter().map(sub).collect::<Result<_>>()?)),
        "implies" => {
            expect(2)?;
            Ok(MsoFormula::implies(sub(&args[0])?, sub(&args[1])?))
        }
        "existsP" | "forallP" | "existsS" | "forallS" => {
            expect(2)?;
            let v = var(&args[0])?;
            let body = Box::new(sub(&args[1])?);
            let sort = if head.ends_with('P') { Sort::Position } else { Sort::Set };
            Ok(if head.starts_with("exists") {
                MsoFormula::Exists(sort, v, body)
            } else {
                MsoFormula::Forall(sort, v, body)
            })
        }
        other => Err(Error::parse(format!("unknown MSO operator `{other}`"))),
    }
}
