use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use crate::semiring::{check_l_monoid_laws, Capabilities, Element, Semiring, SemiringError, SemiringRef};

pub type BinOp = Arc<dyn Fn(&Element, &Element) -> Element + Send + Sync>;

/// The operations of an l-monoid. Element syntax and sampling come from
/// `carrier`; its own arithmetic is ignored.
#[derive(Clone)]
pub struct LMonoidOps {
    pub name: String,
    pub carrier: SemiringRef,
    pub join: BinOp,
    pub mul: BinOp,
    pub residuum: BinOp,
    /// Needed by the residuation solver to combine per-constraint bounds.
    pub meet: BinOp,
    pub bot: Element,
    pub unit: Element,
}

impl LMonoidOps {
    /// Copies every operation from an existing residuated instance.
    pub fn from_instance(name: impl Into<String>, sr: SemiringRef) -> Self {
        let (a, b, c, d) = (sr.clone(), sr.clone(), sr.clone(), sr.clone());
        LMonoidOps {
            name: name.into(),
            bot: sr.zero(),
            unit: sr.one(),
            join: Arc::new(move |x, y| a.add(x, y)),
            mul: Arc::new(move |x, y| b.mul(x, y)),
            residuum: Arc::new(move |x, y| c.residuum(x, y).expect("residuated instance")),
            meet: Arc::new(move |x, y| d.meet(x, y).expect("instance with meets")),
            carrier: sr,
        }
    }
}

#[derive(Clone)]
pub struct WrappedLMonoid {
    ops: LMonoidOps,
}

impl fmt::Debug for WrappedLMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WrappedLMonoid").field("name", &self.ops.name).finish_non_exhaustive()
    }
}

/// Builds an l-monoid instance after checking the l-monoid laws and the
/// residuation adjunction on sampled triples.
pub fn l_monoid_wrap(ops: LMonoidOps, samples: usize, seed: u64) -> Result<SemiringRef, SemiringError> {
    let wrapped = WrappedLMonoid { ops };
    check_l_monoid_laws(&wrapped, samples, seed)?;
    Ok(Arc::new(wrapped))
}

impl Semiring for WrappedLMonoid {
    fn name(&self) -> &str {
        &self.ops.name
    }

    fn capabilities(&self) -> Capabilities {
        let finite = self.ops.carrier.capabilities().is_finite;
        Capabilities { is_finite: finite, ..Capabilities::l_monoid() }
    }

    fn zero(&self) -> Element {
        self.ops.bot.clone()
    }

    fn one(&self) -> Element {
        self.ops.unit.clone()
    }

    fn add(&self, a: &Element, b: &Element) -> Element {
        (self.ops.join)(a, b)
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        (self.ops.mul)(a, b)
    }

    fn parse(&self, token: &str) -> Result<Element, SemiringError> {
        self.ops.carrier.parse(token)
    }

    fn format(&self, e: &Element) -> String {
        self.ops.carrier.format(e)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Element {
        self.ops.carrier.sample(rng)
    }

    fn contains(&self, e: &Element) -> bool {
        self.ops.carrier.contains(e)
    }

    fn residuum(&self, a: &Element, b: &Element) -> Option<Element> {
        Some((self.ops.residuum)(a, b))
    }

    fn meet(&self, a: &Element, b: &Element) -> Option<Element> {
        Some((self.ops.meet)(a, b))
    }
}
