//! Linear inequality systems over named variables and Fourier-Motzkin
//! elimination with integer coefficients.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::format::fmt_sig;

/// Slack on constant rows `0 <= c` before they count as violated.
pub const FEAS_TOL: f64 = 1e-9;
/// Margin used when negating a row in [`implies`].
pub const IMPLY_SLACK: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FmeError {
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("missing value for variable {0}")]
    MissingValue(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One inequality `sum coeffs[v] * v <= rhs`, addressed by variable name.
#[derive(Debug, Clone, PartialEq)]
pub struct LinIneq {
    pub terms: Vec<(String, i64)>,
    pub rhs: f64,
    pub label: Option<String>,
}

impl LinIneq {
    pub fn le<S: AsRef<str>>(terms: &[(S, i64)], rhs: f64) -> Self {
        LinIneq {
            terms: terms
                .iter()
                .map(|(n, c)| (n.as_ref().to_string(), *c))
                .collect(),
            rhs,
            label: None,
        }
    }

    /// `sum coeffs * v >= rhs`, stored as the negated `<=` row.
    pub fn ge<S: AsRef<str>>(terms: &[(S, i64)], rhs: f64) -> Self {
        let mut r = Self::le(terms, rhs);
        r.negate();
        r
    }

    /// Sum of the named variables bounded above.
    pub fn sum_le(names: &[&str], rhs: f64) -> Self {
        LinIneq {
            terms: names.iter().map(|n| (n.to_string(), 1)).collect(),
            rhs,
            label: None,
        }
    }

    pub fn nonneg(name: &str) -> Self {
        Self::le(&[(name, -1)], 0.0).labelled(&format!("{name}>=0"))
    }

    pub fn labelled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    fn negate(&mut self) {
        for t in &mut self.terms {
            t.1 = -t.1;
        }
        self.rhs = -self.rhs;
    }
}

/// A row stored densely against the owning system's variable list.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<i64>,
    pub rhs: f64,
    pub label: Option<String>,
    ancestors: Ancestors,
    /// Eliminated variables (by elimination step) that occurred in the derivation.
    used: Ancestors,
}

impl Row {
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn normalize(&mut self) {
        let g = self.coeffs.iter().fold(0i64, |g, &c| gcd(g, c.abs()));
        if g > 1 {
            for c in &mut self.coeffs {
                *c /= g;
            }
            self.rhs /= g as f64;
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A small bit set, used both for the input rows a derived row was combined
/// from and for the eliminated variables its derivation went through.
///
/// A row built from more than `k + 1` input rows while only `k` eliminated
/// variables took part is implied by the others and can be dropped.
#[derive(Debug, Clone, PartialEq, Default)]
struct Ancestors(Vec<u64>);

impl Ancestors {
    fn single(i: usize) -> Self {
        let mut v = vec![0u64; i / 64 + 1];
        v[i / 64] |= 1 << (i % 64);
        Ancestors(v)
    }

    fn union(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Ancestors(
            (0..n)
                .map(|k| self.0.get(k).copied().unwrap_or(0) | other.0.get(k).copied().unwrap_or(0))
                .collect(),
        )
    }

    fn subset_of(&self, other: &Self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(k, &w)| w & !other.0.get(k).copied().unwrap_or(0) == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A conjunction of `<=` rows over an ordered list of variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinSys {
    vars: Vec<String>,
    rows: Vec<Row>,
    /// Eliminations performed since the ancestor sets were reset.
    eliminated: usize,
    next_id: usize,
}

impl LinSys {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vars<S: AsRef<str>>(vars: &[S]) -> Self {
        let mut s = Self::new();
        for v in vars {
            s.var_index(v.as_ref());
        }
        s
    }

    pub fn from_rows(rows: impl IntoIterator<Item = LinIneq>) -> Self {
        let mut s = Self::new();
        for r in rows {
            s.push(r);
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v == name)
    }

    fn index(&self, name: &str) -> Result<usize, FmeError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| FmeError::UnknownVariable(name.to_string()))
    }

    fn var_index(&mut self, name: &str) -> usize {
        if let Ok(i) = self.index(name) {
            return i;
        }
        self.vars.push(name.to_string());
        for r in &mut self.rows {
            r.coeffs.push(0);
        }
        self.vars.len() - 1
    }

    /// Registers a variable without adding rows.
    pub fn add_var(&mut self, name: &str) {
        self.var_index(name);
    }

    /// Treats the current rows as a fresh input system for the redundancy rule.
    fn reset_ancestry(&mut self) {
        for (k, r) in self.rows.iter_mut().enumerate() {
            r.ancestors = Ancestors::single(k);
            r.used = Ancestors::default();
        }
        self.next_id = self.rows.len();
        self.eliminated = 0;
    }

    /// Appends a row, registering any new variable names.
    pub fn push(&mut self, ineq: LinIneq) {
        if self.eliminated > 0 {
            self.reset_ancestry();
        }
        let idx: Vec<(usize, i64)> = ineq
            .terms
            .iter()
            .map(|(n, c)| (self.var_index(n), *c))
            .collect();
        let mut coeffs = vec![0i64; self.vars.len()];
        for (i, c) in idx {
            coeffs[i] += c;
        }
        let id = self.next_id;
        self.next_id += 1;
        let mut row = Row {
            coeffs,
            rhs: ineq.rhs,
            label: ineq.label,
            ancestors: Ancestors::single(id),
            used: Ancestors::default(),
        };
        row.normalize();
        self.rows.push(row);
    }

    /// `sum coeffs * v == rhs` as a pair of rows.
    pub fn push_eq<S: AsRef<str>>(&mut self, terms: &[(S, i64)], rhs: f64, label: &str) {
        self.push(LinIneq::le(terms, rhs).labelled(label));
        self.push(LinIneq::ge(terms, rhs).labelled(label));
    }

    pub fn extend(&mut self, other: &LinSys) {
        for r in other.ineqs() {
            self.push(r);
        }
    }

    /// Rows converted back to the named form.
    pub fn ineqs(&self) -> impl Iterator<Item = LinIneq> + '_ {
        self.rows.iter().map(|r| self.to_ineq(r))
    }

    pub fn to_ineq(&self, r: &Row) -> LinIneq {
        LinIneq {
            terms: self
                .vars
                .iter()
                .zip(&r.coeffs)
                .filter(|(_, &c)| c != 0)
                .map(|(v, &c)| (v.clone(), c))
                .collect(),
            rhs: r.rhs,
            label: r.label.clone(),
        }
    }

    /// Drops all rows containing `var` and the variable itself.
    pub fn remove_rows_with(&mut self, var: &str) -> Result<(), FmeError> {
        let i = self.index(var)?;
        self.rows.retain(|r| r.coeffs[i] == 0);
        self.drop_column(i);
        Ok(())
    }

    /// Drops rows whose label equals `label`; returns how many were removed.
    pub fn remove_labelled(&mut self, label: &str) -> usize {
        let before = self.rows.len();
        self.rows.retain(|r| r.label.as_deref() != Some(label));
        before - self.rows.len()
    }

    fn drop_column(&mut self, i: usize) {
        self.vars.remove(i);
        for r in &mut self.rows {
            r.coeffs.remove(i);
        }
    }

    /// Fixes `var = value`, moving its contribution to the right-hand side.
    pub fn substitute(&self, var: &str, value: f64) -> Result<LinSys, FmeError> {
        let i = self.index(var)?;
        let mut out = self.clone();
        for r in &mut out.rows {
            r.rhs -= r.coeffs[i] as f64 * value;
        }
        out.drop_column(i);
        out.cleanup();
        Ok(out)
    }

    /// Fixes several variables at once.
    pub fn substitute_all<S: AsRef<str>>(&self, values: &[(S, f64)]) -> Result<LinSys, FmeError> {
        let mut out = self.clone();
        for (v, x) in values {
            out = out.substitute(v.as_ref(), *x)?;
        }
        Ok(out)
    }

    /// Replaces `var` by the integer combination `expr` in every row.
    pub fn substitute_expr<S: AsRef<str>>(&self, var: &str, expr: &[(S, i64)]) -> Result<LinSys, FmeError> {
        let i = self.index(var)?;
        let mut out = self.clone();
        out.reset_ancestry();
        let targets: Vec<(usize, i64)> = expr
            .iter()
            .map(|(n, c)| (out.var_index(n.as_ref()), *c))
            .collect();
        for r in &mut out.rows {
            let c = r.coeffs[i];
            if c != 0 {
                r.coeffs[i] = 0;
                for &(j, k) in &targets {
                    r.coeffs[j] += c * k;
                }
            }
        }
        if !targets.iter().any(|&(j, _)| j == i) {
            out.drop_column(i);
        }
        for r in &mut out.rows {
            r.normalize();
        }
        out.cleanup();
        Ok(out)
    }

    /// Renames a variable; merges with an existing variable of the new name.
    pub fn rename(&self, from: &str, to: &str) -> Result<LinSys, FmeError> {
        self.substitute_expr(from, &[(to, 1)])
    }

    /// True if every row holds at the given assignment (all variables must be assigned).
    pub fn satisfied_by(&self, value: impl Fn(&str) -> Option<f64>, tol: f64) -> Result<bool, FmeError> {
        let vals: Vec<f64> = self
            .vars
            .iter()
            .map(|v| value(v).ok_or_else(|| FmeError::MissingValue(v.clone())))
            .collect::<Result<_, _>>()?;
        Ok(self.rows.iter().all(|r| {
            let lhs: f64 = r.coeffs.iter().zip(&vals).map(|(&c, &x)| c as f64 * x).sum();
            lhs <= r.rhs + tol
        }))
    }

    /// Rows violated at the given assignment, with their slack.
    pub fn violations(&self, value: impl Fn(&str) -> Option<f64>, tol: f64) -> Result<Vec<(LinIneq, f64)>, FmeError> {
        let vals: Vec<f64> = self
            .vars
            .iter()
            .map(|v| value(v).ok_or_else(|| FmeError::MissingValue(v.clone())))
            .collect::<Result<_, _>>()?;
        Ok(self
            .rows
            .iter()
            .filter_map(|r| {
                let lhs: f64 = r.coeffs.iter().zip(&vals).map(|(&c, &x)| c as f64 * x).sum();
                (lhs > r.rhs + tol).then(|| (self.to_ineq(r), r.rhs - lhs))
            })
            .collect())
    }

    /// Removes satisfied constant rows, duplicates and rows dominated by an
    /// identical left-hand side with smaller right-hand side.
    fn cleanup(&mut self) {
        self.dedup(|_, _| true);
    }

    /// Like `cleanup`, but a dominated row is kept unless the dominating row's
    /// ancestors are a subset of its own. The redundancy rule stays exact
    /// only under that restriction.
    fn cleanup_between_steps(&mut self) {
        self.dedup(|winner, loser| {
            winner.ancestors.subset_of(&loser.ancestors) && loser.used.subset_of(&winner.used)
        });
    }

    fn dedup(&mut self, may_drop: impl Fn(&Row, &Row) -> bool) {
        let mut groups: HashMap<Vec<i64>, Vec<usize>> = HashMap::with_capacity(self.rows.len());
        let mut keep: Vec<Option<Row>> = Vec::with_capacity(self.rows.len());
        for r in self.rows.drain(..) {
            if r.is_constant() && r.rhs >= -FEAS_TOL {
                continue;
            }
            let group = groups.entry(r.coeffs.clone()).or_default();
            let dominated = group.iter().any(|&k| {
                let cur = keep[k].as_ref().expect("live row");
                cur.rhs <= r.rhs && may_drop(cur, &r)
            });
            if dominated {
                continue;
            }
            group.retain(|&k| {
                let cur = keep[k].as_ref().expect("live row");
                if r.rhs <= cur.rhs && may_drop(&r, cur) {
                    keep[k] = None;
                    false
                } else {
                    true
                }
            });
            group.push(keep.len());
            keep.push(Some(r));
        }
        self.rows = keep.into_iter().flatten().collect();
    }

    /// Final strict cleanup after a batch of eliminations.
    fn finish(&mut self) {
        self.cleanup();
        self.reset_ancestry();
    }

    /// Projects out one variable.
    pub fn eliminate(&self, var: &str) -> Result<LinSys, FmeError> {
        let i = self.index(var)?;
        let mut out = self.clone();
        out.eliminate_index(i);
        out.finish();
        Ok(out)
    }

    fn eliminate_index(&mut self, i: usize) {
        let step = Ancestors::single(self.eliminated);
        self.eliminated += 1;
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for r in self.rows.drain(..) {
            match r.coeffs[i].signum() {
                1 => pos.push(r),
                -1 => neg.push(r),
                _ => zero.push(r),
            }
        }
        for p in &pos {
            for n in &neg {
                let ancestors = p.ancestors.union(&n.ancestors);
                let used = p.used.union(&n.used).union(&step);
                if ancestors.count() > used.count() + 1 {
                    continue;
                }
                let (a, b) = (p.coeffs[i], -n.coeffs[i]);
                let g = gcd(a, b);
                let (ma, mb) = (b / g, a / g);
                let mut row = Row {
                    coeffs: p
                        .coeffs
                        .iter()
                        .zip(&n.coeffs)
                        .map(|(&x, &y)| ma * x + mb * y)
                        .collect(),
                    rhs: ma as f64 * p.rhs + mb as f64 * n.rhs,
                    label: join_labels(&p.label, &n.label),
                    ancestors,
                    used,
                };
                debug_assert_eq!(row.coeffs[i], 0);
                row.normalize();
                zero.push(row);
            }
        }
        self.rows = zero;
        self.drop_column(i);
        self.cleanup_between_steps();
    }

    /// Eliminates variables in the given order.
    pub fn eliminate_all<S: AsRef<str>>(&self, vars: &[S]) -> Result<LinSys, FmeError> {
        let mut out = self.clone();
        for v in vars {
            let i = out.index(v.as_ref())?;
            out.eliminate_index(i);
        }
        out.finish();
        Ok(out)
    }

    /// Eliminates variables, each time choosing the one that creates the fewest rows.
    pub fn project_out<S: AsRef<str>>(&self, vars: &[S]) -> Result<LinSys, FmeError> {
        let mut out = self.clone();
        let mut todo: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for v in &todo {
            out.index(v)?;
        }
        while !todo.is_empty() {
            let (k, _) = todo
                .iter()
                .enumerate()
                .map(|(k, v)| (k, out.fill_in(out.index(v).expect("checked above"))))
                .min_by_key(|&(k, cost)| (cost, k))
                .expect("nonempty");
            let v = todo.remove(k);
            let i = out.index(&v).expect("checked above");
            out.eliminate_index(i);
        }
        out.finish();
        Ok(out)
    }

    fn fill_in(&self, i: usize) -> i64 {
        let p = self.rows.iter().filter(|r| r.coeffs[i] > 0).count() as i64;
        let n = self.rows.iter().filter(|r| r.coeffs[i] < 0).count() as i64;
        p * n - p - n
    }

    /// Drops every row implied by the remaining ones, deciding each by a
    /// linear program. Rows are visited in order, so among several mutually
    /// implied copies the last survives.
    pub fn remove_redundant(&self) -> LinSys {
        let mut out = self.clone();
        out.cleanup();
        if out.infeasibility_witness().is_some() || !out.lp_feasible() {
            let mut empty = LinSys::with_vars(&out.vars);
            empty.push(LinIneq::le::<&str>(&[], -1.0).labelled("empty"));
            return empty;
        }
        let mut k = 0;
        while k < out.rows.len() {
            if out.row_is_redundant(k) {
                out.rows.remove(k);
            } else {
                k += 1;
            }
        }
        out.reset_ancestry();
        out
    }

    /// Maximizes row `k`'s left-hand side over the other rows (with row `k`
    /// itself relaxed by one unit to keep the program bounded). Each variable
    /// is split into nonnegative parts; the solver does not accept free
    /// variables reliably.
    fn row_is_redundant(&self, k: usize) -> bool {
        use microlp::{ComparisonOp, OptimizationDirection, Problem};
        let target = &self.rows[k];
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = target
            .coeffs
            .iter()
            .map(|&c| {
                let c = c as f64;
                (lp.add_var(c, (0.0, f64::INFINITY)), lp.add_var(-c, (0.0, f64::INFINITY)))
            })
            .collect();
        for (i, r) in self.rows.iter().enumerate() {
            let terms = split_terms(&r.coeffs, &vars);
            if terms.is_empty() {
                continue;
            }
            let rhs = if i == k { r.rhs + 1.0 } else { r.rhs };
            lp.add_constraint(terms.as_slice(), ComparisonOp::Le, rhs);
        }
        match lp.solve() {
            Ok(outcome) => match outcome.solution() {
                Some(sol) => sol.objective() <= target.rhs + FEAS_TOL,
                None => false,
            },
            Err(_) => false,
        }
    }

    /// Constant rows that are violated, if any.
    pub fn infeasibility_witness(&self) -> Option<&Row> {
        self.rows
            .iter()
            .find(|r| r.is_constant() && r.rhs < -FEAS_TOL)
    }

    /// Decides feasibility by a linear program with a zero objective.
    pub fn lp_feasible(&self) -> bool {
        use microlp::{ComparisonOp, OptimizationDirection, Problem};
        if self.infeasibility_witness().is_some() {
            return false;
        }
        let mut lp = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = self
            .vars
            .iter()
            .map(|_| (lp.add_var(0.0, (0.0, f64::INFINITY)), lp.add_var(0.0, (0.0, f64::INFINITY))))
            .collect();
        for r in &self.rows {
            let terms = split_terms(&r.coeffs, &vars);
            if !terms.is_empty() {
                lp.add_constraint(terms.as_slice(), ComparisonOp::Le, r.rhs + FEAS_TOL);
            }
        }
        lp.solve().is_ok()
    }

    /// Decides feasibility by eliminating every variable.
    pub fn is_feasible(&self) -> bool {
        if self.infeasibility_witness().is_some() {
            return false;
        }
        let vars = self.vars.clone();
        let all = self.project_out(&vars).expect("own variables");
        all.infeasibility_witness().is_none()
    }

    /// Parses the text form written by `Display`.
    pub fn from_text(text: &str) -> Result<LinSys, FmeError> {
        let mut sys = LinSys::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| FmeError::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let (body, label) = match line.split_once('#') {
                Some((b, l)) => (b.trim(), Some(l.trim().to_string())),
                None => (line, None),
            };
            let (lhs, rhs) = body.split_once("<=").ok_or_else(|| err("missing <="))?;
            let rhs: f64 = rhs.trim().parse().map_err(|_| err("bad right-hand side"))?;
            let mut terms = Vec::new();
            for tok in lhs.split_whitespace() {
                let (c, name) = tok.split_once('*').ok_or_else(|| err("term must be k*NAME"))?;
                let c: i64 = c.parse().map_err(|_| err("bad coefficient"))?;
                terms.push((name.to_string(), c));
            }
            let mut ineq = LinIneq::le(&terms, rhs);
            ineq.label = label;
            sys.push(ineq);
        }
        Ok(sys)
    }
}

fn join_labels(a: &Option<String>, b: &Option<String>) -> Option<String> {
    match (a, b) {
        (Some(a), Some(b)) if a == b => Some(a.clone()),
        (Some(a), Some(b)) => Some(format!("{a} | {b}")),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

impl fmt::Display for LinIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms.iter().filter(|t| t.1 != 0) {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{c:+}*{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " <= {}", fmt_sig(self.rhs, 12))?;
        if let Some(l) = &self.label {
            write!(f, "  # {l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for LinSys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.ineqs() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn split_terms(coeffs: &[i64], vars: &[(microlp::Variable, microlp::Variable)]) -> Vec<(microlp::Variable, f64)> {
    coeffs
        .iter()
        .zip(vars)
        .filter(|(&c, _)| c != 0)
        .flat_map(|(&c, &(p, m))| [(p, c as f64), (m, -(c as f64))])
        .collect()
}

/// `sys` forces `row`: adding the strict reverse of `row` makes the system infeasible.
pub fn implies(sys: &LinSys, row: &LinIneq) -> bool {
    let mut s = sys.clone();
    let mut neg = row.clone();
    neg.negate();
    neg.rhs -= IMPLY_SLACK;
    neg.label = None;
    s.push(neg);
    !s.is_feasible()
}

/// Both systems describe the same set, checked row by row.
pub fn equivalent(a: &LinSys, b: &LinSys) -> bool {
    a.ineqs().all(|r| implies(b, &r)) && b.ineqs().all(|r| implies(a, &r))
}
