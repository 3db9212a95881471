//! Spans of finite sets: a bicategory whose associator and unitors are
//! genuine (non-identity) bijections.
//!
//! The apex of a composite `gf` consists of pairs `(s, t)` with `s` in the apex
//! of `f` and `t` in the apex of `g` whose legs agree. Apexes are kept sorted,
//! so equal spans have equal representations.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::{Bicategory, ModelError, Sampling};

/// A finite set with labelled elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSet(Arc<FinSetData>);

#[derive(Debug, PartialEq, Eq, Hash)]
struct FinSetData {
    name: Arc<str>,
    elements: Vec<Arc<str>>,
}

impl FinSet {
    /// Fails when element labels repeat.
    pub fn new(
        name: &str,
        elements: impl IntoIterator<Item = impl AsRef<str>>,
    ) -> Result<Self, ModelError> {
        let elements: Vec<Arc<str>> = elements
            .into_iter()
            .map(|e| Arc::from(e.as_ref()))
            .collect();
        let mut sorted = elements.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != elements.len() {
            return Err(ModelError::InvalidCell(format!(
                "set {name} repeats an element"
            )));
        }
        Ok(Self(Arc::new(FinSetData {
            name: Arc::from(name),
            elements,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn elements(&self) -> &[Arc<str>] {
        &self.0.elements
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.elements.iter().position(|e| &**e == label)
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.name())?;
        for (i, e) in self.elements().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(e)?;
        }
        f.write_str("}")
    }
}

/// An apex element: a label, or a pair coming from a composite.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Elem {
    Atom(Arc<str>),
    Pair(Arc<(Elem, Elem)>),
}

impl Elem {
    pub fn atom(label: &str) -> Self {
        Elem::Atom(Arc::from(label))
    }

    pub fn pair(a: Elem, b: Elem) -> Self {
        Elem::Pair(Arc::new((a, b)))
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Atom(a) => f.write_str(a),
            Elem::Pair(p) => write!(f, "({}, {})", p.0, p.1),
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A span `X ← S → Y`, legs given as indices into the elements of `X`, `Y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Span(Arc<SpanData>);

#[derive(Debug, PartialEq, Eq, Hash)]
struct SpanData {
    source: FinSet,
    target: FinSet,
    apex: Vec<Elem>,
    left: Vec<u32>,
    right: Vec<u32>,
}

impl Span {
    /// Builds a span from `(element, left index, right index)` triples in any
    /// order.
    pub fn new(
        source: &FinSet,
        target: &FinSet,
        legs: Vec<(Elem, usize, usize)>,
    ) -> Result<Self, ModelError> {
        let mut legs = legs;
        legs.sort_by(|a, b| a.0.cmp(&b.0));
        for w in legs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ModelError::InvalidCell(format!(
                    "apex element {} repeats",
                    w[0].0
                )));
            }
        }
        for (e, l, r) in &legs {
            if *l >= source.len() || *r >= target.len() {
                return Err(ModelError::InvalidCell(format!(
                    "leg of apex element {e} is out of range"
                )));
            }
        }
        Ok(Self::from_sorted(
            source.clone(),
            target.clone(),
            legs.iter().map(|x| x.0.clone()).collect(),
            legs.iter().map(|x| x.1 as u32).collect(),
            legs.iter().map(|x| x.2 as u32).collect(),
        ))
    }

    fn from_sorted(
        source: FinSet,
        target: FinSet,
        apex: Vec<Elem>,
        left: Vec<u32>,
        right: Vec<u32>,
    ) -> Self {
        Self(Arc::new(SpanData {
            source,
            target,
            apex,
            left,
            right,
        }))
    }

    pub fn source(&self) -> &FinSet {
        &self.0.source
    }

    pub fn target(&self) -> &FinSet {
        &self.0.target
    }

    pub fn apex(&self) -> &[Elem] {
        &self.0.apex
    }

    pub fn left(&self, i: usize) -> usize {
        self.0.left[i] as usize
    }

    pub fn right(&self, i: usize) -> usize {
        self.0.right[i] as usize
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.0.apex.binary_search(e).ok()
    }

    /// Identity span on `x`; its apex is `x`'s labels as atoms.
    pub fn identity(x: &FinSet) -> Self {
        let mut labelled: Vec<(Elem, u32)> = x
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| (Elem::Atom(e.clone()), i as u32))
            .collect();
        labelled.sort();
        let idx: Vec<u32> = labelled.iter().map(|x| x.1).collect();
        Self::from_sorted(
            x.clone(),
            x.clone(),
            labelled.into_iter().map(|x| x.0).collect(),
            idx.clone(),
            idx,
        )
    }

    /// `gf` for `self = f`; `None` if the endpoints do not meet.
    pub fn then(&self, g: &Span) -> Option<Span> {
        if self.target() != g.source() {
            return None;
        }
        let mut apex = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, s) in self.apex().iter().enumerate() {
            for (j, t) in g.apex().iter().enumerate() {
                if self.0.right[i] == g.0.left[j] {
                    apex.push(Elem::pair(s.clone(), t.clone()));
                    left.push(self.0.left[i]);
                    right.push(g.0.right[j]);
                }
            }
        }
        Some(Self::from_sorted(
            self.source().clone(),
            g.target().clone(),
            apex,
            left,
            right,
        ))
    }
}

impl fmt::Debug for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <- {{", self.source().name())?;
        for (i, e) in self.apex().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(
                f,
                "{e}: {} -> {}",
                self.source().elements()[self.left(i)],
                self.target().elements()[self.right(i)]
            )?;
        }
        write!(f, "}} -> {}", self.target().name())
    }
}

/// A map of apexes commuting with both legs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpanCell {
    dom: Span,
    cod: Span,
    map: Vec<u32>,
}

impl SpanCell {
    /// Checks that `dom` and `cod` are parallel and `map` commutes with legs.
    pub fn new(dom: &Span, cod: &Span, map: Vec<usize>) -> Result<Self, ModelError> {
        if dom.source() != cod.source() || dom.target() != cod.target() {
            return Err(ModelError::EndpointMismatch(format!(
                "{dom:?} and {cod:?} are not parallel"
            )));
        }
        if map.len() != dom.apex().len() {
            return Err(ModelError::InvalidCell(format!(
                "map has {} entries for an apex of size {}",
                map.len(),
                dom.apex().len()
            )));
        }
        for (i, &j) in map.iter().enumerate() {
            if j >= cod.apex().len() {
                return Err(ModelError::InvalidCell(format!(
                    "image {j} is out of range"
                )));
            }
            if dom.left(i) != cod.left(j) || dom.right(i) != cod.right(j) {
                return Err(ModelError::NotLegCommuting(format!(
                    "{} is sent to {}",
                    dom.apex()[i],
                    cod.apex()[j]
                )));
            }
        }
        Ok(Self::unchecked(
            dom.clone(),
            cod.clone(),
            map.into_iter().map(|j| j as u32).collect(),
        ))
    }

    fn unchecked(dom: Span, cod: Span, map: Vec<u32>) -> Self {
        Self { dom, cod, map }
    }

    pub fn dom(&self) -> &Span {
        &self.dom
    }

    pub fn cod(&self) -> &Span {
        &self.cod
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    /// `(element, image)` rows of the function table.
    pub fn table(&self) -> Vec<(&Elem, &Elem)> {
        self.dom
            .apex()
            .iter()
            .zip(&self.map)
            .map(|(e, &j)| (e, &self.cod.apex()[j as usize]))
            .collect()
    }
}

impl fmt::Debug for SpanCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.table().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a} -> {b}")?;
        }
        f.write_str("}")
    }
}

/// The bicategory of spans of finite sets.
#[derive(Clone, Copy, Debug, Default)]
pub struct SpanModel;

fn mismatch(what: &str) -> ModelError {
    ModelError::EndpointMismatch(what.to_owned())
}

impl SpanModel {
    /// A 2-cell `dom ⇒ cod` sending each apex element to `image(element)`.
    fn cell_by(
        &self,
        dom: Span,
        cod: Span,
        image: impl Fn(&Elem) -> Option<Elem>,
    ) -> Result<SpanCell, ModelError> {
        let map = dom
            .apex()
            .iter()
            .map(|e| {
                image(e)
                    .and_then(|t| cod.index_of(&t))
                    .map(|j| j as u32)
                    .ok_or_else(|| ModelError::InvalidCell(format!("no image for {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SpanCell::unchecked(dom, cod, map))
    }

    fn compose(&self, g: &Span, f: &Span) -> Result<Span, ModelError> {
        f.then(g)
            .ok_or_else(|| mismatch("target of the first span is not the source of the second"))
    }
}

fn split(e: &Elem) -> Option<(&Elem, &Elem)> {
    match e {
        Elem::Pair(p) => Some((&p.0, &p.1)),
        Elem::Atom(_) => None,
    }
}

impl Bicategory for SpanModel {
    type Object = FinSet;
    type OneCell = Span;
    type TwoCell = SpanCell;

    fn source<'a>(&self, f: &'a Span) -> &'a FinSet {
        f.source()
    }

    fn target<'a>(&self, f: &'a Span) -> &'a FinSet {
        f.target()
    }

    fn cell_source<'a>(&self, alpha: &'a SpanCell) -> &'a Span {
        &alpha.dom
    }

    fn cell_target<'a>(&self, alpha: &'a SpanCell) -> &'a Span {
        &alpha.cod
    }

    fn identity_one(&self, x: &FinSet) -> Span {
        Span::identity(x)
    }

    fn identity_two(&self, f: &Span) -> SpanCell {
        SpanCell::unchecked(f.clone(), f.clone(), (0..f.apex().len() as u32).collect())
    }

    fn compose_one(&self, g: &Span, f: &Span) -> Result<Span, ModelError> {
        self.compose(g, f)
    }

    fn compose_vertical(&self, beta: &SpanCell, alpha: &SpanCell) -> Result<SpanCell, ModelError> {
        if alpha.cod != beta.dom {
            return Err(mismatch("vertical composite of non-adjacent 2-cells"));
        }
        let map = alpha.map.iter().map(|&j| beta.map[j as usize]).collect();
        Ok(SpanCell::unchecked(
            alpha.dom.clone(),
            beta.cod.clone(),
            map,
        ))
    }

    fn compose_horizontal(
        &self,
        beta: &SpanCell,
        alpha: &SpanCell,
    ) -> Result<SpanCell, ModelError> {
        let dom = self.compose(&beta.dom, &alpha.dom)?;
        let cod = self.compose(&beta.cod, &alpha.cod)?;
        let (f, g) = (&alpha.dom, &beta.dom);
        self.cell_by(dom, cod, |e| {
            let (s, t) = split(e)?;
            let s2 = &alpha.cod.apex()[alpha.map[f.index_of(s)?] as usize];
            let t2 = &beta.cod.apex()[beta.map[g.index_of(t)?] as usize];
            Some(Elem::pair(s2.clone(), t2.clone()))
        })
    }

    /// `(s, (t, u)) ↦ ((s, t), u)`.
    fn associator(&self, f: &Span, g: &Span, h: &Span) -> Result<SpanCell, ModelError> {
        let dom = self.compose(&self.compose(h, g)?, f)?;
        let cod = self.compose(h, &self.compose(g, f)?)?;
        self.cell_by(dom, cod, |e| {
            let (s, tu) = split(e)?;
            let (t, u) = split(tu)?;
            Some(Elem::pair(Elem::pair(s.clone(), t.clone()), u.clone()))
        })
    }

    fn associator_inverse(&self, f: &Span, g: &Span, h: &Span) -> Result<SpanCell, ModelError> {
        let dom = self.compose(h, &self.compose(g, f)?)?;
        let cod = self.compose(&self.compose(h, g)?, f)?;
        self.cell_by(dom, cod, |e| {
            let (st, u) = split(e)?;
            let (s, t) = split(st)?;
            Some(Elem::pair(s.clone(), Elem::pair(t.clone(), u.clone())))
        })
    }

    /// `(s, y) ↦ s`.
    fn left_unitor(&self, f: &Span) -> Result<SpanCell, ModelError> {
        let dom = self.compose(&Span::identity(f.target()), f)?;
        self.cell_by(dom, f.clone(), |e| split(e).map(|(s, _)| s.clone()))
    }

    fn left_unitor_inverse(&self, f: &Span) -> Result<SpanCell, ModelError> {
        let id = Span::identity(f.target());
        let cod = self.compose(&id, f)?;
        let map = (0..f.apex().len())
            .map(|i| {
                let y = Elem::Atom(f.target().elements()[f.right(i)].clone());
                cod.index_of(&Elem::pair(f.apex()[i].clone(), y))
                    .map(|j| j as u32)
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ModelError::InvalidCell("left unitor inverse".into()))?;
        Ok(SpanCell::unchecked(f.clone(), cod, map))
    }

    /// `(x, s) ↦ s`.
    fn right_unitor(&self, f: &Span) -> Result<SpanCell, ModelError> {
        let dom = self.compose(f, &Span::identity(f.source()))?;
        self.cell_by(dom, f.clone(), |e| split(e).map(|(_, s)| s.clone()))
    }

    fn right_unitor_inverse(&self, f: &Span) -> Result<SpanCell, ModelError> {
        let id = Span::identity(f.source());
        let cod = self.compose(f, &id)?;
        let map = (0..f.apex().len())
            .map(|i| {
                let x = Elem::Atom(f.source().elements()[f.left(i)].clone());
                cod.index_of(&Elem::pair(x, f.apex()[i].clone()))
                    .map(|j| j as u32)
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ModelError::InvalidCell("right unitor inverse".into()))?;
        Ok(SpanCell::unchecked(f.clone(), cod, map))
    }
}

impl Sampling for SpanModel {
    fn random_object<R: Rng + ?Sized>(&self, rng: &mut R, name: &str, max_size: usize) -> FinSet {
        let n = rng.gen_range(1..=max_size.max(1));
        FinSet::new(name, (0..n).map(|i| format!("{}{i}", name.to_lowercase())))
            .expect("distinct labels")
    }

    fn random_one_cell<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        x: &FinSet,
        y: &FinSet,
        max_size: usize,
    ) -> Span {
        let n = rng.gen_range(1..=max_size.max(1));
        let legs = (0..n)
            .map(|i| {
                (
                    Elem::atom(&format!("s{i}")),
                    rng.gen_range(0..x.len()),
                    rng.gen_range(0..y.len()),
                )
            })
            .collect();
        Span::new(x, y, legs).expect("generated span is well formed")
    }

    fn random_two_cell<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        f: &Span,
        g: &Span,
    ) -> Option<SpanCell> {
        if f.source() != g.source() || f.target() != g.target() {
            return None;
        }
        let mut map = Vec::with_capacity(f.apex().len());
        for i in 0..f.apex().len() {
            let options: Vec<u32> = (0..g.apex().len())
                .filter(|&j| g.left(j) == f.left(i) && g.right(j) == f.right(i))
                .map(|j| j as u32)
                .collect();
            if options.is_empty() {
                return None;
            }
            map.push(options[rng.gen_range(0..options.len())]);
        }
        Some(SpanCell::unchecked(f.clone(), g.clone(), map))
    }
}

/// The span whose apex is all of `x × y`, which receives a 2-cell from every
/// parallel span.
pub fn complete_span(x: &FinSet, y: &FinSet) -> Span {
    let mut legs = Vec::new();
    for i in 0..x.len() {
        for j in 0..y.len() {
            legs.push((Elem::atom(&format!("c{i}_{j}")), i, j));
        }
    }
    Span::new(x, y, legs).expect("complete span is well formed")
}
