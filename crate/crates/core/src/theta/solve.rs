use rayon::prelude::*;
use serde::Serialize;

use super::domain::CoefficientDomain;
use super::system::RelationSystem;

/// Values of the generators, indexed by variable id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MeasureAssignment {
    pub domain: CoefficientDomain,
    pub values: Vec<i64>,
}

#[derive(Clone, Debug)]
enum Constraint {
    /// `Σ coefs·vars = constant`
    Linear {
        vars: Vec<usize>,
        coefs: Vec<i64>,
        constant: i64,
    },
    /// `a0·a1 = b0·b1`
    Quadratic { a: [usize; 2], b: [usize; 2] },
}

struct Problem {
    domain: CoefficientDomain,
    values: Vec<i64>,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
    /// Some relation reduces to `0 = c` with `c ≠ 0`.
    infeasible: bool,
    nvars: usize,
}

impl Problem {
    fn new(system: &RelationSystem, domain: CoefficientDomain) -> Problem {
        let nvars = system.variables.len();
        let mut constraints = Vec::new();
        let mut infeasible = false;
        for l in &system.linear {
            let mut coef = vec![0i64; nvars];
            coef[l.lhs] += 1;
            for &t in &l.terms {
                coef[t] -= 1;
            }
            let (mut vars, mut coefs) = (Vec::new(), Vec::new());
            for (v, &c) in coef.iter().enumerate() {
                let c = domain.norm(c);
                if c != 0 {
                    vars.push(v);
                    coefs.push(c);
                }
            }
            let constant = domain.norm(l.constant as i64);
            if vars.is_empty() {
                infeasible |= constant != 0;
                continue;
            }
            constraints.push(Constraint::Linear {
                vars,
                coefs,
                constant,
            });
        }
        for q in &system.quadratic {
            constraints.push(Constraint::Quadratic {
                a: [q.left.0, q.left.1],
                b: [q.right.0, q.right.1],
            });
        }
        let mut watch = vec![Vec::new(); nvars];
        for (ci, c) in constraints.iter().enumerate() {
            let vars: Vec<usize> = match c {
                Constraint::Linear { vars, .. } => vars.clone(),
                Constraint::Quadratic { a, b } => vec![a[0], a[1], b[0], b[1]],
            };
            let mut vars = vars;
            vars.sort_unstable();
            vars.dedup();
            for v in vars {
                watch[v].push(ci);
            }
        }
        Problem {
            domain,
            values: domain.values(),
            constraints,
            watch,
            infeasible,
            nvars,
        }
    }
}

#[derive(Clone)]
struct State {
    vals: Vec<Option<i64>>,
    trail: Vec<usize>,
}

impl State {
    fn assign(&mut self, v: usize, x: i64, queue: &mut Vec<usize>) {
        self.vals[v] = Some(x);
        self.trail.push(v);
        queue.push(v);
    }

    fn undo(&mut self, to: usize) {
        while self.trail.len() > to {
            let v = self.trail.pop().unwrap();
            self.vals[v] = None;
        }
    }
}

impl Problem {
    fn eval_quad(
        &self,
        s: &State,
        a: [usize; 2],
        b: [usize; 2],
        free: Option<(usize, i64)>,
    ) -> Option<bool> {
        let get = |v: usize| match free {
            Some((f, x)) if f == v => Some(x),
            _ => s.vals[v],
        };
        let l = get(a[0])? as i128 * get(a[1])? as i128;
        let r = get(b[0])? as i128 * get(b[1])? as i128;
        Some(self.domain.norm_wide(l - r) == 0)
    }

    /// Check one constraint; may force a value. `false` on conflict.
    fn check(&self, ci: usize, s: &mut State, queue: &mut Vec<usize>) -> bool {
        match &self.constraints[ci] {
            Constraint::Linear {
                vars,
                coefs,
                constant,
            } => {
                let mut sum: i128 = 0;
                let mut open = None;
                let mut open_count = 0;
                let mut slack: i128 = 0;
                for (&v, &c) in vars.iter().zip(coefs) {
                    match s.vals[v] {
                        Some(x) => sum += c as i128 * x as i128,
                        None => {
                            open_count += 1;
                            open = Some((v, c));
                            slack += (c as i128).abs();
                        }
                    }
                }
                let rest = *constant as i128 - sum;
                match (open_count, self.domain.modulus()) {
                    (0, _) => self.domain.norm_wide(rest) == 0,
                    (1, None) => {
                        let (v, c) = open.unwrap();
                        let c = c as i128;
                        if rest % c != 0 || (rest / c).abs() > 1 {
                            return false;
                        }
                        s.assign(v, (rest / c) as i64, queue);
                        true
                    }
                    (1, Some(p)) => {
                        let (v, c) = open.unwrap();
                        let x = self.domain.norm_wide(rest * inverse(c, p) as i128);
                        s.assign(v, x, queue);
                        true
                    }
                    (_, None) => rest.abs() <= slack,
                    _ => true,
                }
            }
            Constraint::Quadratic { a, b } => {
                let mut open: Option<usize> = None;
                for v in [a[0], a[1], b[0], b[1]] {
                    if s.vals[v].is_none() {
                        match open {
                            None => open = Some(v),
                            Some(o) if o == v => {}
                            Some(_) => return true,
                        }
                    }
                }
                let Some(v) = open else {
                    return self.eval_quad(s, *a, *b, None).unwrap();
                };
                let mut allowed = self
                    .values
                    .iter()
                    .filter(|&&x| self.eval_quad(s, *a, *b, Some((v, x))).unwrap());
                match (allowed.next(), allowed.next()) {
                    (None, _) => false,
                    (Some(&x), None) => {
                        s.assign(v, x, queue);
                        true
                    }
                    _ => true,
                }
            }
        }
    }

    fn propagate(&self, s: &mut State, queue: &mut Vec<usize>) -> bool {
        while let Some(v) = queue.pop() {
            for &ci in &self.watch[v] {
                if !self.check(ci, s, queue) {
                    queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn search(&self, s: &mut State, out: &mut Vec<Vec<i64>>) {
        let Some(v) = (0..self.nvars).find(|&v| s.vals[v].is_none()) else {
            out.push(s.vals.iter().map(|x| x.unwrap()).collect());
            return;
        };
        let mark = s.trail.len();
        let mut queue = Vec::new();
        for &x in &self.values {
            s.assign(v, x, &mut queue);
            if self.propagate(s, &mut queue) {
                self.search(s, out);
            }
            s.undo(mark);
        }
    }

    fn initial(&self) -> Option<State> {
        if self.infeasible {
            return None;
        }
        let mut s = State {
            vals: vec![None; self.nvars],
            trail: Vec::new(),
        };
        let mut queue = Vec::new();
        for ci in 0..self.constraints.len() {
            if !self.check(ci, &mut s, &mut queue) || !self.propagate(&mut s, &mut queue) {
                return None;
            }
        }
        Some(s)
    }
}

fn inverse(c: i64, p: i64) -> i64 {
    // Fermat; p is prime and c ≢ 0
    let (mut base, mut e, mut acc) = (c.rem_euclid(p) as i128, p - 2, 1i128);
    let p = p as i128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as i64
}

/// Every assignment of domain values to the variables satisfying all
/// relations, sorted.
pub fn solve(system: &RelationSystem, domain: CoefficientDomain) -> Vec<MeasureAssignment> {
    let problem = Problem::new(system, domain);
    let Some(root) = problem.initial() else {
        return Vec::new();
    };
    let mut found: Vec<Vec<i64>> = match (0..problem.nvars).find(|&v| root.vals[v].is_none()) {
        None => vec![root.vals.iter().map(|x| x.unwrap()).collect()],
        Some(v) => problem
            .values
            .par_iter()
            .flat_map_iter(|&x| {
                let mut s = root.clone();
                let mut queue = Vec::new();
                let mut out = Vec::new();
                s.assign(v, x, &mut queue);
                if problem.propagate(&mut s, &mut queue) {
                    problem.search(&mut s, &mut out);
                }
                out
            })
            .collect(),
    };
    found.sort();
    found.dedup();
    found
        .into_iter()
        .map(|values| MeasureAssignment { domain, values })
        .collect()
}

/// Assignments whose generator values are all units.
pub fn regular_filter(assignments: &[MeasureAssignment]) -> Vec<MeasureAssignment> {
    assignments
        .iter()
        .filter(|a| a.values.iter().all(|&x| a.domain.is_unit(x)))
        .cloned()
        .collect()
}

/// Whether `values` satisfies every relation of `system` over `domain`.
pub fn satisfies(system: &RelationSystem, domain: CoefficientDomain, values: &[i64]) -> bool {
    let problem = Problem::new(system, domain);
    if problem.infeasible || values.len() != problem.nvars {
        return false;
    }
    let mut s = State {
        vals: values.iter().map(|&x| Some(domain.norm(x))).collect(),
        trail: Vec::new(),
    };
    let mut queue = Vec::new();
    (0..problem.constraints.len()).all(|ci| problem.check(ci, &mut s, &mut queue))
}
