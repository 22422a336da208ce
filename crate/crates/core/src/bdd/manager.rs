use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::cts::CtsError;

static NEXT_MANAGER: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

const FALSE: NodeId = NodeId(0);
const TRUE: NodeId = NodeId(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    And,
    Or,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum CacheOp {
    And,
    Or,
    Not,
}

/// A BDD root tagged with its manager.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneBdd {
    root: NodeId,
    manager: u64,
}

impl MonotoneBdd {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn is_false(&self) -> bool {
        self.root == FALSE
    }

    pub fn is_true(&self) -> bool {
        self.root == TRUE
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: NodeId,
    hi: NodeId,
}

/// Hash-consed node store with an operation cache. Variables are numbered
/// `0..num_vars` and tested in that order along every path.
#[derive(Debug)]
pub struct BddManager {
    id: u64,
    num_vars: u32,
    nodes: Vec<Node>,
    unique: HashMap<Node, NodeId>,
    cache: HashMap<(CacheOp, NodeId, NodeId), NodeId>,
}

impl BddManager {
    pub fn new(num_vars: usize) -> Self {
        let num_vars = u32::try_from(num_vars).expect("variable count fits u32");
        let terminal = Node { var: num_vars, lo: FALSE, hi: FALSE };
        BddManager {
            id: NEXT_MANAGER.fetch_add(1, Ordering::Relaxed),
            num_vars,
            nodes: vec![terminal, Node { hi: TRUE, lo: TRUE, ..terminal }],
            unique: HashMap::new(),
            cache: HashMap::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars as usize
    }

    /// Nodes allocated so far, terminals included.
    pub fn allocated(&self) -> usize {
        self.nodes.len()
    }

    pub fn clear_cache(&mut self) {
        self.cache.clear();
    }

    fn wrap(&self, root: NodeId) -> MonotoneBdd {
        MonotoneBdd { root, manager: self.id }
    }

    pub(crate) fn check(&self, f: &MonotoneBdd) -> Result<(), CtsError> {
        if f.manager != self.id {
            return Err(CtsError::ManagerMismatch);
        }
        Ok(())
    }

    pub fn constant(&self, value: bool) -> MonotoneBdd {
        self.wrap(if value { TRUE } else { FALSE })
    }

    fn mk(&mut self, var: u32, lo: NodeId, hi: NodeId) -> NodeId {
        if lo == hi {
            return lo;
        }
        let node = Node { var, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = NodeId(u32::try_from(self.nodes.len()).expect("node table overflow"));
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    fn node(&self, id: NodeId) -> Node {
        self.nodes[id.0 as usize]
    }

    /// The positive literal of variable `v`.
    pub fn var(&mut self, v: usize) -> Result<MonotoneBdd, CtsError> {
        if v >= self.num_vars as usize {
            return Err(CtsError::PosetShapeMismatch { expected: self.num_vars as usize, found: v + 1 });
        }
        let id = self.mk(v as u32, FALSE, TRUE);
        Ok(self.wrap(id))
    }

    /// The single assignment whose bit `i` gives variable `i`.
    pub(crate) fn minterm(&mut self, mask: usize) -> Result<MonotoneBdd, CtsError> {
        let mut id = TRUE;
        for v in (0..self.num_vars).rev() {
            id = if mask >> v & 1 == 1 { self.mk(v, FALSE, id) } else { self.mk(v, id, FALSE) };
        }
        Ok(self.wrap(id))
    }

    pub(crate) fn from_truth_table<F: Fn(usize) -> bool>(&mut self, f: F) -> Result<MonotoneBdd, CtsError> {
        fn build<F: Fn(usize) -> bool>(m: &mut BddManager, f: &F, v: u32, mask: usize) -> NodeId {
            if v == m.num_vars {
                return if f(mask) { TRUE } else { FALSE };
            }
            let lo = build(m, f, v + 1, mask);
            let hi = build(m, f, v + 1, mask | 1 << v);
            m.mk(v, lo, hi)
        }
        let id = build(self, &f, 0, 0);
        Ok(self.wrap(id))
    }

    pub fn eval(&self, f: &MonotoneBdd, mask: usize) -> bool {
        let mut id = f.root;
        while id != TRUE && id != FALSE {
            let n = self.node(id);
            id = if mask >> n.var & 1 == 1 { n.hi } else { n.lo };
        }
        id == TRUE
    }

    /// Distinct nodes reachable from `f`, terminals included.
    pub fn node_count(&self, f: &MonotoneBdd) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![f.root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            if id != TRUE && id != FALSE {
                let n = self.node(id);
                stack.push(n.lo);
                stack.push(n.hi);
            }
        }
        seen.len()
    }

    fn apply_rec(&mut self, op: CacheOp, f: NodeId, g: NodeId) -> NodeId {
        match op {
            CacheOp::And => {
                if f == FALSE || g == FALSE {
                    return FALSE;
                }
                if f == TRUE {
                    return g;
                }
                if g == TRUE || f == g {
                    return f;
                }
            }
            CacheOp::Or => {
                if f == TRUE || g == TRUE {
                    return TRUE;
                }
                if f == FALSE {
                    return g;
                }
                if g == FALSE || f == g {
                    return f;
                }
            }
            CacheOp::Not => {
                if f == TRUE {
                    return FALSE;
                }
                if f == FALSE {
                    return TRUE;
                }
            }
        }
        // commutative ops share cache entries
        let key = if op != CacheOp::Not && g < f { (op, g, f) } else { (op, f, g) };
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let nf = self.node(f);
        let r = if op == CacheOp::Not {
            let lo = self.apply_rec(op, nf.lo, FALSE);
            let hi = self.apply_rec(op, nf.hi, FALSE);
            self.mk(nf.var, lo, hi)
        } else {
            let ng = self.node(g);
            let var = nf.var.min(ng.var);
            let (f0, f1) = if nf.var == var { (nf.lo, nf.hi) } else { (f, f) };
            let (g0, g1) = if ng.var == var { (ng.lo, ng.hi) } else { (g, g) };
            let lo = self.apply_rec(op, f0, g0);
            let hi = self.apply_rec(op, f1, g1);
            self.mk(var, lo, hi)
        };
        self.cache.insert(key, r);
        r
    }

    pub fn apply(&mut self, op: BoolOp, f: &MonotoneBdd, g: &MonotoneBdd) -> Result<MonotoneBdd, CtsError> {
        self.check(f)?;
        self.check(g)?;
        let op = match op {
            BoolOp::And => CacheOp::And,
            BoolOp::Or => CacheOp::Or,
        };
        let r = self.apply_rec(op, f.root, g.root);
        Ok(self.wrap(r))
    }

    /// Complement. Leaves the monotone sublattice, so only used internally.
    pub(crate) fn not(&mut self, f: &MonotoneBdd) -> Result<MonotoneBdd, CtsError> {
        self.check(f)?;
        let r = self.apply_rec(CacheOp::Not, f.root, FALSE);
        Ok(self.wrap(r))
    }

    /// Cofactor `f[v := value]`.
    pub fn restrict(&mut self, f: &MonotoneBdd, v: usize, value: bool) -> Result<MonotoneBdd, CtsError> {
        self.check(f)?;
        let mut memo = HashMap::new();
        let r = self.restrict_rec(f.root, v as u32, value, &mut memo);
        Ok(self.wrap(r))
    }

    fn restrict_rec(&mut self, id: NodeId, v: u32, value: bool, memo: &mut HashMap<NodeId, NodeId>) -> NodeId {
        let n = self.node(id);
        if n.var > v {
            return id;
        }
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let r = if n.var == v {
            if value {
                n.hi
            } else {
                n.lo
            }
        } else {
            let lo = self.restrict_rec(n.lo, v, value, memo);
            let hi = self.restrict_rec(n.hi, v, value, memo);
            self.mk(n.var, lo, hi)
        };
        memo.insert(id, r);
        r
    }
}

/// `f ∧ g` or `f ∨ g`.
pub fn bdd_apply(manager: &mut BddManager, op: BoolOp, f: &MonotoneBdd, g: &MonotoneBdd) -> Result<MonotoneBdd, CtsError> {
    manager.apply(op, f, g)
}
