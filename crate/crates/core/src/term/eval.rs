//! Exhaustive identity checking.
//!
//! An identity is compiled to straight-line code over a register file: the
//! first registers hold the variables, the rest binary join/meet results with
//! common subterms shared. Each instruction is tagged with the largest
//! variable index it depends on, so after assigning variable `d` only the
//! instructions of level `d` are rerun.
//!
//! Assignments are visited depth first in declared variable order with values
//! ascending, so the first failure found is the lexicographically least one.
//! Monotonicity gives cheap bounds for a partial assignment: evaluating with
//! the unassigned variables at top (resp. bottom) bounds every completion from
//! above (resp. below). A subtree is skipped when the bounds already prove
//! every inequality, and cut short when they already refute one.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Identity, Relation, Term};
use crate::error::{Error, Result};
use crate::lattice::FinLattice;

pub const DEFAULT_MAX_ASSIGNMENTS: f64 = 1e9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Report the lexicographically least failing assignment.
    First,
    /// Stop at any failure; the witness may depend on scheduling.
    Any,
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub prune: bool,
    /// Use `rhs_below_lhs` to check a single inclusion for equations.
    pub use_valid_inclusion: bool,
    pub mode: SearchMode,
    /// Ignore the size guard.
    pub force: bool,
    pub max_assignments: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            prune: true,
            use_valid_inclusion: true,
            mode: SearchMode::First,
            force: false,
            max_assignments: DEFAULT_MAX_ASSIGNMENTS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Element per declared variable.
    pub assignment: Vec<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

impl Witness {
    /// `(variable, element label)` pairs.
    pub fn describe(&self, id: &Identity, l: &FinLattice) -> Vec<(String, String)> {
        id.vars
            .iter()
            .zip(&self.assignment)
            .map(|(v, &x)| (v.clone(), l.label(x).to_string()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CheckOutcome {
    Holds,
    Fails(Witness),
}

impl CheckOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, CheckOutcome::Holds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            CheckOutcome::Holds => None,
            CheckOutcome::Fails(w) => Some(w),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Instr {
    join: bool,
    a: u16,
    b: u16,
    out: u16,
}

#[derive(Debug)]
struct Program {
    k: usize,
    regs: usize,
    instrs: Vec<Instr>,
    /// Instructions of level `d` are `instrs[start[d]..start[d + 1]]`.
    start: Vec<usize>,
    lhs: u16,
    rhs: u16,
    /// Pairs `(small, big)` that must satisfy `small ≤ big`.
    checks: Vec<(u16, u16)>,
}

struct Compiler<'a> {
    vars: &'a [String],
    instrs: Vec<(Instr, usize)>,
    cse: HashMap<(bool, u16, u16), (u16, usize)>,
    next: u16,
}

impl Compiler<'_> {
    fn term(&mut self, t: &Term) -> (u16, usize) {
        match t {
            Term::Var(v) => {
                let i = self.vars.iter().position(|x| x == v).expect("validated");
                (i as u16, i)
            }
            Term::Join(ts) | Term::Meet(ts) => {
                let join = matches!(t, Term::Join(_));
                let mut parts: Vec<(u16, usize)> = ts.iter().map(|c| self.term(c)).collect();
                // combine low-level operands first so partial results hoist
                parts.sort_by_key(|&(r, lvl)| (lvl, r));
                parts.dedup();
                let mut acc = parts[0];
                for &p in &parts[1..] {
                    acc = self.emit(join, acc, p);
                }
                acc
            }
        }
    }

    fn emit(&mut self, join: bool, x: (u16, usize), y: (u16, usize)) -> (u16, usize) {
        let (a, b) = (x.0.min(y.0), x.0.max(y.0));
        if let Some(&hit) = self.cse.get(&(join, a, b)) {
            return hit;
        }
        let out = self.next;
        self.next += 1;
        let level = x.1.max(y.1);
        self.instrs.push((Instr { join, a, b, out }, level));
        self.cse.insert((join, a, b), (out, level));
        (out, level)
    }
}

fn compile(id: &Identity, opts: &CheckOptions) -> Program {
    let k = id.vars.len();
    let mut c = Compiler {
        vars: &id.vars,
        instrs: Vec::new(),
        cse: HashMap::new(),
        next: k as u16,
    };
    let (lhs, _) = c.term(&id.lhs);
    let (rhs, _) = c.term(&id.rhs);
    let checks = match id.relation {
        Relation::Below => vec![(lhs, rhs)],
        Relation::Equals if id.rhs_below_lhs && opts.use_valid_inclusion => vec![(lhs, rhs)],
        Relation::Equals => vec![(lhs, rhs), (rhs, lhs)],
    };
    let mut instrs = c.instrs;
    instrs.sort_by_key(|&(_, lvl)| lvl);
    let mut start = vec![0; k.max(1) + 1];
    for d in 0..=k.max(1) {
        start[d] = instrs.iter().take_while(|&&(_, lvl)| lvl < d).count();
    }
    Program {
        k,
        regs: c.next as usize,
        instrs: instrs.into_iter().map(|(i, _)| i).collect(),
        start,
        lhs,
        rhs,
        checks,
    }
}

struct Machine<'a> {
    p: &'a Program,
    l: &'a FinLattice,
    n: usize,
    regs: Vec<u8>,
    ub: Vec<u8>,
    lb: Vec<u8>,
    prune: bool,
}

enum Bound {
    Proved,
    Refuted,
    Open,
}

impl<'a> Machine<'a> {
    fn new(p: &'a Program, l: &'a FinLattice, prune: bool) -> Self {
        Machine {
            p,
            l,
            n: l.len(),
            regs: vec![0; p.regs],
            ub: vec![0; p.regs],
            lb: vec![0; p.regs],
            prune,
        }
    }

    #[inline]
    fn run(regs: &mut [u8], instrs: &[Instr], l: &FinLattice, n: usize) {
        let (join, meet) = (l.join_table(), l.meet_table());
        for ins in instrs {
            let idx = regs[ins.a as usize] as usize * n + regs[ins.b as usize] as usize;
            regs[ins.out as usize] = if ins.join { join[idx] } else { meet[idx] };
        }
    }

    fn set(&mut self, d: usize, v: usize) {
        self.regs[d] = v as u8;
        let range = self.p.start[d]..self.p.start[d + 1];
        Self::run(&mut self.regs, &self.p.instrs[range], self.l, self.n);
    }

    /// Bounds for completions of the first `d` variables.
    fn bound(&mut self, d: usize) -> Bound {
        let p = self.p;
        self.ub.copy_from_slice(&self.regs);
        self.lb.copy_from_slice(&self.regs);
        for i in d..p.k {
            self.ub[i] = self.l.top() as u8;
            self.lb[i] = self.l.bottom() as u8;
        }
        let rest = &p.instrs[p.start[d]..];
        Self::run(&mut self.ub, rest, self.l, self.n);
        Self::run(&mut self.lb, rest, self.l, self.n);
        let leq = |a: u8, b: u8| self.l.leq(a as usize, b as usize);
        if p
            .checks
            .iter()
            .any(|&(s, b)| !leq(self.lb[s as usize], self.ub[b as usize]))
        {
            return Bound::Refuted;
        }
        if p
            .checks
            .iter()
            .all(|&(s, b)| leq(self.ub[s as usize], self.lb[b as usize]))
        {
            return Bound::Proved;
        }
        Bound::Open
    }

    fn leaf_fails(&self) -> bool {
        self.p.checks.iter().any(|&(s, b)| {
            !self
                .l
                .leq(self.regs[s as usize] as usize, self.regs[b as usize] as usize)
        })
    }

    fn witness(&self, assignment: Vec<usize>) -> Witness {
        // registers may hold a partial state; re-evaluate the full assignment
        let mut regs = vec![0u8; self.p.regs];
        for (i, &v) in assignment.iter().enumerate() {
            regs[i] = v as u8;
        }
        Self::run(&mut regs, &self.p.instrs, self.l, self.n);
        Witness {
            assignment,
            lhs: regs[self.p.lhs as usize] as usize,
            rhs: regs[self.p.rhs as usize] as usize,
        }
    }

    /// Depth-first search below a state where variables `0..d` are set.
    fn dfs(&mut self, d: usize) -> Option<Vec<usize>> {
        if d == self.p.k {
            return self
                .leaf_fails()
                .then(|| self.regs[..d].iter().map(|&v| v as usize).collect());
        }
        if self.prune && d < self.p.k {
            match self.bound(d) {
                Bound::Proved => return None,
                Bound::Refuted => {
                    // every completion fails; the least sets the rest to 0
                    let mut w: Vec<usize> = self.regs[..d].iter().map(|&v| v as usize).collect();
                    w.resize(self.p.k, 0);
                    return Some(w);
                }
                Bound::Open => {}
            }
        }
        for v in 0..self.n {
            self.set(d, v);
            if let Some(w) = self.dfs(d + 1) {
                return Some(w);
            }
        }
        None
    }
}

/// Number of assignments, as a float to avoid overflow.
pub fn assignment_count(l: &FinLattice, id: &Identity) -> f64 {
    (l.len() as f64).powi(id.vars.len() as i32)
}

pub fn check(l: &FinLattice, id: &Identity) -> Result<CheckOutcome> {
    check_with(l, id, &CheckOptions::default())
}

pub fn check_with(l: &FinLattice, id: &Identity, opts: &CheckOptions) -> Result<CheckOutcome> {
    id.validate()?;
    let count = assignment_count(l, id);
    if !opts.force && count > opts.max_assignments {
        return Err(Error::SizeGuard(format!(
            "{} has {}^{} = {count:.3e} assignments (limit {:.0e}); use force to override",
            id.name,
            l.len(),
            id.vars.len(),
            opts.max_assignments
        )));
    }
    let prog = compile(id, opts);
    let n = l.len();
    let k = prog.k;
    let prefix = k.min(2);
    let tasks = n.pow(prefix as u32);
    let run_task = |t: usize| -> Option<Witness> {
        let mut m = Machine::new(&prog, l, opts.prune);
        let mut rem = t;
        let mut digits = vec![0; prefix];
        for d in (0..prefix).rev() {
            digits[d] = rem % n;
            rem /= n;
        }
        for (d, &v) in digits.iter().enumerate() {
            m.set(d, v);
        }
        if k == 0 {
            Machine::run(&mut m.regs, &prog.instrs, l, n);
        }
        m.dfs(prefix).map(|w| m.witness(w))
    };
    let found = match opts.mode {
        SearchMode::First => (0..tasks).into_par_iter().find_map_first(run_task),
        SearchMode::Any => (0..tasks).into_par_iter().find_map_any(run_task),
    };
    Ok(match found {
        None => CheckOutcome::Holds,
        Some(w) => CheckOutcome::Fails(w),
    })
}

/// Reference loop: interprets the term trees on every assignment in
/// lexicographic order. No compilation, pruning or parallelism.
pub fn check_naive(l: &FinLattice, id: &Identity) -> Result<CheckOutcome> {
    id.validate()?;
    let k = id.vars.len();
    let n = l.len();
    let mut a = vec![0usize; k];
    loop {
        let value = |name: &str| a[id.vars.iter().position(|v| v == name).unwrap()];
        let lhs = id.lhs.eval(l, &value);
        let rhs = id.rhs.eval(l, &value);
        let ok = match id.relation {
            Relation::Below => l.leq(lhs, rhs),
            Relation::Equals => lhs == rhs,
        };
        if !ok {
            return Ok(CheckOutcome::Fails(Witness {
                assignment: a,
                lhs,
                rhs,
            }));
        }
        // increment, last variable fastest
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(CheckOutcome::Holds);
            }
            i -= 1;
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
        }
    }
}

/// Evaluates both sides under one assignment.
pub fn evaluate(l: &FinLattice, id: &Identity, assignment: &[usize]) -> Result<(usize, usize)> {
    if assignment.len() != id.vars.len() || assignment.iter().any(|&x| x >= l.len()) {
        return Err(Error::Precondition(format!(
            "assignment of length {} for {} variables",
            assignment.len(),
            id.vars.len()
        )));
    }
    let value = |name: &str| assignment[id.vars.iter().position(|v| v == name).unwrap()];
    Ok((id.lhs.eval(l, &value), id.rhs.eval(l, &value)))
}
