//! One-step provability, least models, the Gelfond-Lifschitz reduct and
//! operator, and stable models by exhaustive search.

use crate::atoms::{subsets, AtomSet, Interpretation};
use crate::error::{Error, Result};
use crate::syntax::{Clause, Program};

/// Universe bound for [`stable_models_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 20;

fn require_horn(p: &Program) -> Result<()> {
    match p.clauses().iter().find(|c| !c.is_horn()) {
        Some(c) => Err(Error::NotHorn {
            clause: p.clause_text(c),
        }),
        None => Ok(()),
    }
}

/// `T_P(I)` for a Horn program.
pub fn tp_step(p: &Program, i: &Interpretation) -> Result<Interpretation> {
    require_horn(p)?;
    Ok(tpm_step(p, &AtomSet::new(), i))
}

/// Least fixpoint of `T_P` from the empty set.
pub fn least_model(p: &Program) -> Result<Interpretation> {
    require_horn(p)?;
    Ok(lfp(p.universe().len(), |i| tpm_step(p, &AtomSet::new(), i)))
}

/// Iterates a monotone operator from ∅. On a universe of `n` atoms the
/// iteration must stabilise within `n + 1` steps.
fn lfp(n: usize, step: impl Fn(&AtomSet) -> AtomSet) -> AtomSet {
    let mut current = AtomSet::new();
    for _ in 0..=n {
        let next = step(&current);
        if next == current {
            return current;
        }
        current = next;
    }
    assert_eq!(
        step(&current),
        current,
        "fixpoint iteration did not converge"
    );
    current
}

/// `T_{P,M}(I)`: heads of clauses whose positive body is in `I` and whose
/// negative body misses `M`.
pub fn tpm_step(p: &Program, m: &Interpretation, i: &Interpretation) -> Interpretation {
    p.clauses()
        .iter()
        .filter(|c| c.pos.is_subset(i) && c.neg.is_disjoint(m))
        .map(|c| c.head)
        .collect()
}

/// The Gelfond-Lifschitz reduct `P_M`: clauses blocked by `M` are removed,
/// negative literals are dropped from the rest.
pub fn gl_reduct(p: &Program, m: &Interpretation) -> Program {
    let clauses = p
        .clauses()
        .iter()
        .filter(|c| c.neg.is_disjoint(m))
        .map(|c| Clause::new(c.head, c.pos.clone(), AtomSet::new()))
        .collect();
    Program::new(p.universe().clone(), clauses)
}

/// `GL_P(M)`, the least model of the reduct.
pub fn gl_operator(p: &Program, m: &Interpretation) -> Interpretation {
    let via_reduct = least_model(&gl_reduct(p, m)).expect("reducts are Horn");
    debug_assert_eq!(via_reduct, gl_operator_via_tpm(p, m));
    via_reduct
}

/// `GL_P(M)` as the least fixpoint of `T_{P,M}`.
pub fn gl_operator_via_tpm(p: &Program, m: &Interpretation) -> Interpretation {
    lfp(p.universe().len(), |i| tpm_step(p, m, i))
}

pub fn is_stable_model(p: &Program, m: &Interpretation) -> bool {
    gl_operator(p, m) == *m
}

/// Every stable model, found by testing all subsets of the universe.
pub fn stable_models_bruteforce(p: &Program) -> Result<Vec<Interpretation>> {
    stable_models_bruteforce_with_limit(p, BRUTEFORCE_LIMIT)
}

pub fn stable_models_bruteforce_with_limit(
    p: &Program,
    limit: usize,
) -> Result<Vec<Interpretation>> {
    let n = p.universe().len();
    if n > limit {
        return Err(Error::TooManyAtoms { count: n, limit });
    }
    let mut models: Vec<_> = subsets(n).filter(|m| is_stable_model(p, m)).collect();
    models.sort();
    Ok(models)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = "p. q :- p, not r. r :- not q. s :- not t.";

    fn prog(text: &str) -> Program {
        Program::parse(text).unwrap()
    }

    fn set(p: &Program, names: &str) -> AtomSet {
        p.atom_set(names).unwrap()
    }

    #[test]
    fn tp_step_examples() {
        let p = prog("p. q :- p.");
        assert_eq!(tp_step(&p, &AtomSet::new()).unwrap(), set(&p, "p"));
        assert_eq!(tp_step(&p, &set(&p, "p")).unwrap(), set(&p, "p,q"));
        let p = prog("p :- p.");
        assert_eq!(tp_step(&p, &AtomSet::new()).unwrap(), AtomSet::new());
        assert!(matches!(
            tp_step(&prog(EX1), &AtomSet::new()),
            Err(Error::NotHorn { clause }) if clause == "q :- p, not r."
        ));
    }

    #[test]
    fn least_model_examples() {
        let p = prog("p. q :- p. s.");
        assert_eq!(least_model(&p).unwrap(), set(&p, "p,q,s"));
        assert_eq!(least_model(&Program::default()).unwrap(), AtomSet::new());
        assert_eq!(
            least_model(&prog("p :- q. q :- p.")).unwrap(),
            AtomSet::new()
        );
        assert!(least_model(&prog(EX1)).is_err());
    }

    #[test]
    fn tpm_step_examples() {
        let p = prog(EX1);
        assert_eq!(
            tpm_step(&p, &set(&p, "p,q,s"), &AtomSet::new()),
            set(&p, "p,s")
        );
        let all = p.universe().full_set();
        assert_eq!(tpm_step(&p, &all, &AtomSet::new()), set(&p, "p"));
    }

    #[test]
    fn reduct_examples() {
        let p = prog(EX1);
        let r = gl_reduct(&p, &set(&p, "p,q,s"));
        assert_eq!(r.to_string(), "#atoms p, q, r, s, t.\np.\nq :- p.\ns.\n");
        let r = gl_reduct(&p, &set(&p, "p,r,s"));
        assert_eq!(r.to_string(), "#atoms p, q, r, s, t.\np.\nr.\ns.\n");
        let h = prog("p. q :- p, r.");
        assert_eq!(gl_reduct(&h, &set(&h, "q")), h);
    }

    #[test]
    fn gl_examples() {
        let p = prog(EX1);
        assert_eq!(gl_operator(&p, &set(&p, "p,q,s")), set(&p, "p,q,s"));
        assert_eq!(gl_operator(&p, &AtomSet::new()), set(&p, "p,q,r,s"));
        assert_eq!(gl_operator(&p, &p.universe().full_set()), set(&p, "p"));
    }

    #[test]
    fn stability() {
        let p = prog(EX1);
        assert!(is_stable_model(&p, &set(&p, "p,q,s")));
        assert!(!is_stable_model(&p, &set(&p, "p,q,r,s")));
        let h = prog("a. b :- a. c :- d.");
        assert!(is_stable_model(&h, &least_model(&h).unwrap()));
    }

    #[test]
    fn bruteforce_examples() {
        let p = prog(EX1);
        assert_eq!(
            stable_models_bruteforce(&p).unwrap(),
            vec![set(&p, "p,q,s"), set(&p, "p,r,s")]
        );
        assert!(stable_models_bruteforce(&prog("p :- not p."))
            .unwrap()
            .is_empty());
        let h = prog("a. b :- a. c :- d.");
        assert_eq!(
            stable_models_bruteforce(&h).unwrap(),
            vec![least_model(&h).unwrap()]
        );
        let wide = Program::parse(
            &(0..21)
                .map(|i| format!("a{i}."))
                .collect::<Vec<_>>()
                .join(" "),
        )
        .unwrap();
        assert!(matches!(
            stable_models_bruteforce(&wide),
            Err(Error::TooManyAtoms {
                count: 21,
                limit: 20
            })
        ));
    }

    #[test]
    fn head_in_own_negative_body_is_legal() {
        let p = prog("p :- not p, q. q.");
        assert_eq!(gl_operator(&p, &AtomSet::new()), set(&p, "p,q"));
        assert_eq!(gl_operator(&p, &set(&p, "p,q")), set(&p, "q"));
    }
}
