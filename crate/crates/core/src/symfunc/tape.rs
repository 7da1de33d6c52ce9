use std::collections::HashMap;

use super::{bump_value, Node, Point, SymError, SymExpr};

#[derive(Clone, Copy, Debug)]
enum Instr {
    Const(f64),
    Var(u8),
    Add(u32, u32),
    Mul(u32, u32),
    Pow(u32, i32),
    Bump(u32, f64),
    DetInv([u32; 4]),
}

#[derive(Hash, PartialEq, Eq)]
enum Key {
    Const(u64),
    Var(u8),
    Add(Vec<u32>),
    Mul(Vec<u32>),
    Pow(u32, i32),
    Bump(u32, u64),
    DetInv([u32; 4]),
}

/// A compiled [`SymExpr`]: instructions in dependency order with common
/// subexpressions merged.
#[derive(Clone, Debug)]
pub struct Tape {
    instrs: Vec<Instr>,
    operands: Vec<u32>,
}

struct Compiler {
    instrs: Vec<Instr>,
    operands: Vec<u32>,
    by_ptr: HashMap<*const Node, u32>,
    by_key: HashMap<Key, u32>,
}

impl Compiler {
    fn emit(&mut self, key: Key, make: impl FnOnce(&mut Self) -> Instr) -> u32 {
        if let Some(&i) = self.by_key.get(&key) {
            return i;
        }
        let instr = make(self);
        let idx = self.instrs.len() as u32;
        self.instrs.push(instr);
        self.by_key.insert(key, idx);
        idx
    }

    fn operand_list(&mut self, ids: &[u32]) -> (u32, u32) {
        let start = self.operands.len() as u32;
        self.operands.extend_from_slice(ids);
        (start, ids.len() as u32)
    }

    fn visit(&mut self, e: &SymExpr) -> u32 {
        let ptr = e.key();
        if let Some(&i) = self.by_ptr.get(&ptr) {
            return i;
        }
        let idx = match e.node() {
            Node::Const(c) => self.emit(Key::Const(c.to_bits()), |_| Instr::Const(*c)),
            Node::Var(v) => self.emit(Key::Var(v.index() as u8), |_| Instr::Var(v.index() as u8)),
            Node::Add(ts) | Node::Mul(ts) => {
                let is_add = matches!(e.node(), Node::Add(_));
                let mut ids: Vec<u32> = ts.iter().map(|t| self.visit(t)).collect();
                ids.sort_unstable();
                let key = if is_add {
                    Key::Add(ids.clone())
                } else {
                    Key::Mul(ids.clone())
                };
                self.emit(key, |c| {
                    let (s, n) = c.operand_list(&ids);
                    if is_add {
                        Instr::Add(s, n)
                    } else {
                        Instr::Mul(s, n)
                    }
                })
            }
            Node::Pow(x, n) => {
                let xi = self.visit(x);
                self.emit(Key::Pow(xi, *n), |_| Instr::Pow(xi, *n))
            }
            Node::Bump { radius, arg } => {
                let ai = self.visit(arg);
                self.emit(Key::Bump(ai, radius.to_bits()), |_| Instr::Bump(ai, *radius))
            }
            Node::DetInv(m) => {
                let ids = [
                    self.visit(&m[0]),
                    self.visit(&m[1]),
                    self.visit(&m[2]),
                    self.visit(&m[3]),
                ];
                self.emit(Key::DetInv(ids), |_| Instr::DetInv(ids))
            }
        };
        self.by_ptr.insert(ptr, idx);
        idx
    }
}

impl Tape {
    pub fn compile(e: &SymExpr) -> Tape {
        let mut c = Compiler {
            instrs: Vec::new(),
            operands: Vec::new(),
            by_ptr: HashMap::new(),
            by_key: HashMap::new(),
        };
        let root = c.visit(e);
        // the root is always the last instruction emitted unless it was
        // merged with an earlier node; append a copy to keep that invariant
        if root as usize != c.instrs.len() - 1 {
            let s = c.operands.len() as u32;
            c.operands.push(root);
            c.instrs.push(Instr::Add(s, 1));
        }
        Tape {
            instrs: c.instrs,
            operands: c.operands,
        }
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// A scratch buffer sized for this tape.
    pub fn scratch(&self) -> Vec<f64> {
        vec![0.0; self.instrs.len()]
    }

    /// Evaluates at `p`, using `scratch` (at least [`Tape::len`] long).
    #[inline]
    pub fn eval_with(&self, p: &Point, scratch: &mut [f64]) -> Result<f64, SymError> {
        let ops = &self.operands;
        for (i, ins) in self.instrs.iter().enumerate() {
            let v = match *ins {
                Instr::Const(c) => c,
                Instr::Var(k) => p[k as usize],
                Instr::Add(s, n) => {
                    let mut acc = 0.0;
                    for &o in &ops[s as usize..(s + n) as usize] {
                        acc += scratch[o as usize];
                    }
                    acc
                }
                Instr::Mul(s, n) => {
                    let mut acc = 1.0;
                    for &o in &ops[s as usize..(s + n) as usize] {
                        let x = scratch[o as usize];
                        if x == 0.0 {
                            acc = 0.0;
                            break;
                        }
                        acc *= x;
                    }
                    acc
                }
                Instr::Pow(x, n) => scratch[x as usize].powi(n),
                Instr::Bump(x, r) => bump_value(scratch[x as usize], r),
                Instr::DetInv([a, b, c, d]) => {
                    let det = scratch[a as usize] * scratch[d as usize] - scratch[b as usize] * scratch[c as usize];
                    if det == 0.0 {
                        return Err(SymError::DetZero);
                    }
                    1.0 / det
                }
            };
            scratch[i] = v;
        }
        Ok(scratch[self.instrs.len() - 1])
    }

    pub fn eval(&self, p: &Point) -> Result<f64, SymError> {
        let mut scratch = self.scratch();
        self.eval_with(p, &mut scratch)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{point, standard_bump, Var};
    use super::*;

    #[test]
    fn tape_matches_tree_evaluation() {
        let (f, _) = standard_bump(0.4).unwrap();
        let e = f.diff(Var::A).diff(Var::B) * SymExpr::det_inv() + f.diff(Var::D);
        let tape = e.compile();
        let p = point(&[(Var::A, 1.1), (Var::B, 0.12), (Var::C, -0.05), (Var::D, 0.9)]);
        let (x, y) = (tape.eval(&p).unwrap(), e.eval(&p).unwrap());
        assert!((x - y).abs() <= 1e-13 * y.abs());
    }

    #[test]
    fn common_subexpressions_are_merged() {
        let x = SymExpr::var(Var::X);
        let e = SymExpr::bump(0.5, x.clone() - SymExpr::one()) * SymExpr::bump(0.5, x.clone() - SymExpr::one());
        // x, -1, (x - 1), bump, product
        assert_eq!(e.compile().len(), 5);
        assert_eq!(SymExpr::constant(2.5).compile().eval(&[0.0; Var::COUNT]).unwrap(), 2.5);
        assert_eq!(x.compile().eval(&point(&[(Var::X, -3.0)])).unwrap(), -3.0);
    }
}
