//! Built-in identities: `E`, `P`, `HS`, `STAR` and `D2DUAL`.

use super::{Identity, Relation, Term};
use crate::error::{Error, Result};

pub const BUILTIN_NAMES: [&str; 5] = ["E", "P", "HS", "STAR", "D2DUAL"];

fn v(name: &str) -> Term {
    Term::var(name)
}

fn j(ts: Vec<Term>) -> Term {
    Term::join(ts)
}

fn m(ts: Vec<Term>) -> Term {
    Term::meet(ts)
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Variables `x, a, b0, b1, b2`.
pub fn identity_e() -> Identity {
    let b = |i: usize| v(&format!("b{i}"));
    let ab = |t: Term| j(vec![v("a"), t]);
    let lhs = m(vec![v("x"), ab(b(0)), ab(b(1)), ab(b(2))]);
    let mut rhs = Vec::new();
    for i in 0..3 {
        let mut parts = vec![v("x"), b(i)];
        parts.extend((0..3).filter(|&k| k != i).map(|k| ab(b(k))));
        rhs.push(m(parts));
    }
    for s in PERMUTATIONS {
        let b0s = m(vec![b(s[0]), j(vec![v("x"), b(s[1])])]);
        let b1s = m(vec![
            b(s[1]),
            j(vec![v("x"), b(s[2])]),
            j(vec![b(s[0]), b(s[2])]),
        ]);
        rhs.push(m(vec![v("x"), ab(b0s), ab(b1s), ab(b(s[2]))]));
    }
    Identity {
        name: "E".into(),
        vars: ["x", "a", "b0", "b1", "b2"].map(String::from).to_vec(),
        relation: Relation::Equals,
        lhs,
        rhs: j(rhs),
        rhs_below_lhs: true,
    }
}

/// `b ∧ (b0 ∨ b1)`.
fn b_prime() -> Term {
    m(vec![v("b"), j(vec![v("b0"), v("b1")])])
}

/// Variables `a, b, c, d, b0, b1`.
pub fn identity_p() -> Identity {
    let bp = b_prime;
    let cd = || j(vec![v("c"), v("d")]);
    let lhs = m(vec![v("a"), j(vec![bp(), v("c")]), cd()]);
    let mut rhs = vec![
        m(vec![v("a"), bp(), cd()]),
        m(vec![v("a"), v("d"), j(vec![bp(), v("c")])]),
        m(vec![
            v("a"),
            j(vec![m(vec![bp(), j(vec![v("a"), v("d")])]), v("c")]),
            cd(),
        ]),
    ];
    for i in 0..2 {
        let bi = || v(&format!("b{i}"));
        rhs.push(m(vec![
            v("a"),
            j(vec![bi(), v("c")]),
            j(vec![
                m(vec![bp(), j(vec![v("a"), bi()]), j(vec![bi(), v("d")])]),
                v("c"),
            ]),
            cd(),
        ]));
    }
    Identity {
        name: "P".into(),
        vars: ["a", "b", "c", "d", "b0", "b1"].map(String::from).to_vec(),
        relation: Relation::Equals,
        lhs,
        rhs: j(rhs),
        rhs_below_lhs: true,
    }
}

/// Variables `a, b, c, b0, b1`.
pub fn identity_hs() -> Identity {
    let bp = b_prime;
    let bi = |i: usize| v(&format!("b{i}"));
    let lhs = m(vec![v("a"), j(vec![bp(), v("c")])]);
    let mut rhs = vec![m(vec![v("a"), bp()])];
    for i in 0..2 {
        rhs.push(m(vec![v("a"), j(vec![m(vec![v("b"), bi(i)]), v("c")])]));
    }
    let head = |i: usize| j(vec![m(vec![bp(), j(vec![v("a"), bi(i)])]), v("c")]);
    for i in 0..2 {
        rhs.push(m(vec![
            v("a"),
            head(i),
            j(vec![bi(i), v("c")]),
            j(vec![v("b"), bi(1 - i)]),
        ]));
    }
    for i in 0..2 {
        rhs.push(m(vec![
            v("a"),
            head(i),
            j(vec![bi(0), v("c")]),
            j(vec![bi(1), v("c")]),
        ]));
    }
    Identity {
        name: "HS".into(),
        vars: ["a", "b", "c", "b0", "b1"].map(String::from).to_vec(),
        relation: Relation::Equals,
        lhs,
        rhs: j(rhs),
        rhs_below_lhs: true,
    }
}

/// `(x1^(n), x2^(n))` from the recursion
/// `x1' = x1 ∧ (x0 ∨ x2) ∧ (x0 ∨ xb)`, `x2' = x2 ∧ (x3 ∨ x1) ∧ (x3 ∨ xa)`.
pub fn star_iterates(n: usize) -> (Term, Term) {
    let (mut x1, mut x2) = (v("x1"), v("x2"));
    for _ in 0..n {
        let n1 = m(vec![
            x1.clone(),
            j(vec![v("x0"), x2.clone()]),
            j(vec![v("x0"), v("xb")]),
        ]);
        let n2 = m(vec![x2, j(vec![v("x3"), x1]), j(vec![v("x3"), v("xa")])]);
        x1 = n1;
        x2 = n2;
    }
    (x1, x2)
}

pub fn star_s() -> Term {
    m(vec![
        v("x1"),
        j(vec![
            v("x0"),
            m(vec![j(vec![v("x1"), v("xb")]), j(vec![v("x2"), v("xa")])]),
        ]),
    ])
}

/// The six joinands of `t`.
pub fn star_t_parts() -> Vec<Term> {
    let x1_x0_x2_with = |y: &str, z: &str| {
        m(vec![
            v("x1"),
            j(vec![v("x0"), m(vec![v("x2"), j(vec![v(y), v(z)])])]),
        ])
    };
    vec![
        m(vec![v("x1"), v("xb")]),
        m(vec![v("x1"), j(vec![v("x0"), v("xa")])]),
        m(vec![v("x1"), j(vec![v("x2"), v("xa")])]),
        x1_x0_x2_with("x1", "xa"),
        x1_x0_x2_with("x1", "xb"),
        x1_x0_x2_with("x3", "xb"),
    ]
}

/// Variables `x0, x1, x2, x3, xa, xb`: `x1^(2) ≤ s ∨ t`.
pub fn identity_star() -> Identity {
    let mut rhs = vec![star_s()];
    rhs.push(j(star_t_parts()));
    Identity {
        name: "STAR".into(),
        vars: ["x0", "x1", "x2", "x3", "xa", "xb"].map(String::from).to_vec(),
        relation: Relation::Below,
        lhs: star_iterates(2).0,
        rhs: j(rhs),
        rhs_below_lhs: false,
    }
}

/// Variables `x, y0, y1, y2`.
pub fn identity_d2dual() -> Identity {
    let y = |i: usize| v(&format!("y{i}"));
    let lhs = m(vec![v("x"), j(vec![y(0), y(1), y(2)])]);
    let rhs = j(vec![
        m(vec![v("x"), j(vec![y(0), y(1)])]),
        m(vec![v("x"), j(vec![y(0), y(2)])]),
        m(vec![v("x"), j(vec![y(1), y(2)])]),
    ]);
    Identity {
        name: "D2DUAL".into(),
        vars: ["x", "y0", "y1", "y2"].map(String::from).to_vec(),
        relation: Relation::Equals,
        lhs,
        rhs,
        rhs_below_lhs: true,
    }
}

pub fn builtin(name: &str) -> Result<Identity> {
    match name.to_ascii_uppercase().as_str() {
        "E" => Ok(identity_e()),
        "P" => Ok(identity_p()),
        "HS" => Ok(identity_hs()),
        "STAR" | "*" => Ok(identity_star()),
        "D2DUAL" => Ok(identity_d2dual()),
        _ => Err(Error::UnknownIdentity(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_identity, parse_term};

    #[test]
    fn declared_variables() {
        assert_eq!(identity_e().vars, vec!["x", "a", "b0", "b1", "b2"]);
        assert_eq!(identity_p().vars.len(), 6);
        assert_eq!(identity_star().vars, vec!["x0", "x1", "x2", "x3", "xa", "xb"]);
        for name in BUILTIN_NAMES {
            builtin(name).unwrap().validate().unwrap();
        }
        assert!(builtin("S").is_err());
    }

    #[test]
    fn e_has_nine_joinands() {
        match identity_e().rhs {
            Term::Join(ts) => assert_eq!(ts.len(), 9),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn star_recursion_base_and_t() {
        assert_eq!(star_iterates(0), (v("x1"), v("x2")));
        assert_eq!(star_t_parts().len(), 6);
        let (x1, _) = star_iterates(1);
        assert_eq!(x1.to_string(), "(^ x1 (v x0 x2) (v x0 xb))");
    }

    #[test]
    fn star_serialization_reparses() {
        let id = identity_star();
        let again = parse_identity("STAR", &id.to_sexpr()).unwrap();
        assert_eq!(again.lhs, id.lhs);
        assert_eq!(again.rhs, id.rhs);
        assert_eq!(parse_term(&id.rhs.to_string()).unwrap(), id.rhs);
    }
}
