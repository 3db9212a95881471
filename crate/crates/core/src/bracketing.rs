//! Bracketings as binary trees, associativity moves and associator chains.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest length accepted by [`enumerate_bracketings`].
pub const MAX_ENUMERATION_LENGTH: usize = 12;

/// A parenthesization of a sequence of `len()` dashes.
///
/// `Empty` has length zero and only ever stands alone; it is never a child
/// of a `Pair`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bracketing {
    Empty,
    Dash,
    Pair(Box<Bracketing>, Box<Bracketing>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error("bracketing length {0} exceeds the enumeration limit {MAX_ENUMERATION_LENGTH}")]
    TooLong(usize),
    #[error("length must be at least 1")]
    ZeroLength,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("no node at address {0}")]
    InvalidAddress(Address),
    #[error("move {0} does not match the tree at its position")]
    RedexMismatch(AssocMove),
    #[error("leaves {start}..{end} do not form a subtree of {tree}")]
    NotASubtree {
        start: usize,
        end: usize,
        tree: Bracketing,
    },
    #[error("frozen segment is bracketed {left} in one tree and {right} in the other")]
    FrozenShapeDiffers { left: Bracketing, right: Bracketing },
    #[error("parse error at character {position}: {message}")]
    Parse { position: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    L,
    R,
}

/// Path from the root to a node, as a sequence of left/right steps.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(pub Vec<Step>);

impl Address {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn child(&self, step: Step) -> Self {
        let mut steps = self.0.clone();
        steps.push(step);
        Self(steps)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether `self` equals `other` or lies below it.
    pub fn starts_with(&self, other: &Address) -> bool {
        self.0.starts_with(&other.0)
    }

    /// `prefix` followed by the steps of `self`.
    pub fn under(&self, prefix: &Address) -> Self {
        let mut steps = prefix.0.clone();
        steps.extend(self.0.iter().copied());
        Self(steps)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::L => "L",
                Step::R => "R",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Address {
    type Err = BracketError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, c)| match c {
                'L' => Ok(Step::L),
                'R' => Ok(Step::R),
                _ => Err(BracketError::Parse {
                    position,
                    message: format!("expected L or R, found {c:?}"),
                }),
            })
            .collect::<Result<_, _>>()
            .map(Self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// `(xy)z → x(yz)`
    LeftToRight,
    /// `x(yz) → (xy)z`
    RightToLeft,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }
}

/// One rotation of the tree at `position`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AssocMove {
    pub position: Address,
    pub direction: Direction,
}

impl AssocMove {
    pub fn new(position: Address, direction: Direction) -> Self {
        Self {
            position,
            direction,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            position: self.position.clone(),
            direction: self.direction.opposite(),
        }
    }
}

impl fmt::Display for AssocMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.direction {
            Direction::LeftToRight => "(xy)z->x(yz)",
            Direction::RightToLeft => "x(yz)->(xy)z",
        };
        if self.position.is_root() {
            write!(f, "{arrow} at root")
        } else {
            write!(f, "{arrow} at {}", self.position)
        }
    }
}

impl Bracketing {
    pub fn pair(left: Bracketing, right: Bracketing) -> Self {
        Bracketing::Pair(Box::new(left), Box::new(right))
    }

    /// Juxtaposes two bracketings, dropping empty sides.
    pub fn join(left: Bracketing, right: Bracketing) -> Self {
        match (left, right) {
            (Bracketing::Empty, r) => r,
            (l, Bracketing::Empty) => l,
            (l, r) => Bracketing::pair(l, r),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Bracketing::Empty => 0,
            Bracketing::Dash => 1,
            Bracketing::Pair(l, r) => l.len() + r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Bracketing::Empty)
    }

    /// `((--)-)...-` with `n` dashes; `Empty` for `n = 0`.
    pub fn left_normalized_or_empty(n: usize) -> Self {
        (1..n).fold(
            if n == 0 {
                Bracketing::Empty
            } else {
                Bracketing::Dash
            },
            |acc, _| Bracketing::pair(acc, Bracketing::Dash),
        )
    }

    pub fn children(&self) -> Option<(&Bracketing, &Bracketing)> {
        match self {
            Bracketing::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn subtree(&self, address: &Address) -> Option<&Bracketing> {
        let mut node = self;
        for step in &address.0 {
            let (l, r) = node.children()?;
            node = match step {
                Step::L => l,
                Step::R => r,
            };
        }
        Some(node)
    }

    fn subtree_mut(&mut self, address: &Address) -> Option<&mut Bracketing> {
        let mut node = self;
        for step in &address.0 {
            node = match (node, step) {
                (Bracketing::Pair(l, _), Step::L) => l,
                (Bracketing::Pair(_, r), Step::R) => r,
                _ => return None,
            };
        }
        Some(node)
    }

    /// The leaves covered by the node at `address`, as `(first, count)`.
    pub fn leaf_span(&self, address: &Address) -> Option<(usize, usize)> {
        let mut node = self;
        let mut start = 0;
        for step in &address.0 {
            let (l, r) = node.children()?;
            node = match step {
                Step::L => l,
                Step::R => {
                    start += l.len();
                    r
                }
            };
        }
        Some((start, node.len()))
    }

    /// Address of the node covering exactly the leaves `start .. start + len`.
    pub fn address_of_interval(&self, start: usize, len: usize) -> Option<Address> {
        if len == 0 || start + len > self.len() {
            return None;
        }
        let mut node = self;
        let mut offset = 0;
        let mut address = Address::root();
        loop {
            if offset == start && node.len() == len {
                return Some(address);
            }
            let (l, r) = node.children()?;
            if start + len <= offset + l.len() {
                node = l;
                address.0.push(Step::L);
            } else if start >= offset + l.len() {
                offset += l.len();
                node = r;
                address.0.push(Step::R);
            } else {
                return None;
            }
        }
    }

    /// Address of the deepest node whose leaves include `start .. start + len`.
    pub fn lowest_cover(&self, start: usize, len: usize) -> Address {
        let mut node = self;
        let mut offset = 0;
        let mut address = Address::root();
        while let Some((l, r)) = node.children() {
            if start + len <= offset + l.len() {
                node = l;
                address.0.push(Step::L);
            } else if start >= offset + l.len() {
                offset += l.len();
                node = r;
                address.0.push(Step::R);
            } else {
                break;
            }
        }
        address
    }

    /// Replaces the node at `address` with `replacement`.
    pub fn replace_at(
        &self,
        address: &Address,
        replacement: Bracketing,
    ) -> Result<Bracketing, BracketError> {
        let mut out = self.clone();
        let slot = out
            .subtree_mut(address)
            .ok_or_else(|| BracketError::InvalidAddress(address.clone()))?;
        *slot = replacement;
        Ok(out)
    }

    /// Substitutes `inner` for the `index`-th dash (0-based).
    pub fn substitute_leaf(&self, index: usize, inner: &Bracketing) -> Option<Bracketing> {
        let address = self.address_of_interval(index, 1)?;
        if inner.is_empty() {
            return None;
        }
        self.replace_at(&address, inner.clone()).ok()
    }

    /// Replaces the subtree spanning `start .. start + len` by a single dash.
    pub fn collapse_interval(
        &self,
        start: usize,
        len: usize,
    ) -> Result<(Bracketing, Address), BracketError> {
        let address =
            self.address_of_interval(start, len)
                .ok_or_else(|| BracketError::NotASubtree {
                    start,
                    end: start + len,
                    tree: self.clone(),
                })?;
        let collapsed = self.replace_at(&address, Bracketing::Dash)?;
        Ok((collapsed, address))
    }

    pub fn apply_move(&self, m: &AssocMove) -> Result<Bracketing, BracketError> {
        let node = self
            .subtree(&m.position)
            .ok_or_else(|| BracketError::InvalidAddress(m.position.clone()))?;
        let rotated = match (m.direction, node) {
            (Direction::LeftToRight, Bracketing::Pair(xy, z)) => match &**xy {
                Bracketing::Pair(x, y) => Bracketing::pair(
                    (**x).clone(),
                    Bracketing::pair((**y).clone(), (**z).clone()),
                ),
                _ => return Err(BracketError::RedexMismatch(m.clone())),
            },
            (Direction::RightToLeft, Bracketing::Pair(x, yz)) => match &**yz {
                Bracketing::Pair(y, z) => Bracketing::pair(
                    Bracketing::pair((**x).clone(), (**y).clone()),
                    (**z).clone(),
                ),
                _ => return Err(BracketError::RedexMismatch(m.clone())),
            },
            _ => return Err(BracketError::RedexMismatch(m.clone())),
        };
        self.replace_at(&m.position, rotated)
    }

    /// Applies `moves` in order.
    pub fn apply_moves<'a>(
        &self,
        moves: impl IntoIterator<Item = &'a AssocMove>,
    ) -> Result<Bracketing, BracketError> {
        moves
            .into_iter()
            .try_fold(self.clone(), |b, m| b.apply_move(m))
    }

    /// Every move applicable to this tree.
    pub fn available_moves(&self) -> Vec<AssocMove> {
        let mut out = Vec::new();
        self.collect_moves(&Address::root(), &mut out);
        out
    }

    fn collect_moves(&self, at: &Address, out: &mut Vec<AssocMove>) {
        if let Bracketing::Pair(l, r) = self {
            if matches!(**l, Bracketing::Pair(..)) {
                out.push(AssocMove::new(at.clone(), Direction::LeftToRight));
            }
            if matches!(**r, Bracketing::Pair(..)) {
                out.push(AssocMove::new(at.clone(), Direction::RightToLeft));
            }
            l.collect_moves(&at.child(Step::L), out);
            r.collect_moves(&at.child(Step::R), out);
        }
    }

    fn write_nested(&self, f: &mut fmt::Formatter<'_>, outer: bool) -> fmt::Result {
        match self {
            Bracketing::Empty => Ok(()),
            Bracketing::Dash => f.write_str("-"),
            Bracketing::Pair(l, r) => {
                if !outer {
                    f.write_str("(")?;
                }
                l.write_nested(f, false)?;
                r.write_nested(f, false)?;
                if !outer {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Outermost parentheses are omitted: `(--)-`, `-(--)`. `Empty` prints as
/// the empty string.
impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_nested(f, true)
    }
}

impl fmt::Debug for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracketing::Empty => f.write_str("Bracketing(empty)"),
            _ => write!(f, "Bracketing({self})"),
        }
    }
}

/// Accepts `-` or `−` for dashes, parentheses for grouping and whitespace
/// anywhere. A group holds one or two items.
impl FromStr for Bracketing {
    type Err = BracketError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<(usize, char)> = s
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        if tokens.is_empty() {
            return Ok(Bracketing::Empty);
        }
        let mut pos = 0;
        let tree = parse_group(&tokens, &mut pos)?;
        if let Some(&(position, c)) = tokens.get(pos) {
            return Err(BracketError::Parse {
                position,
                message: format!("unexpected {c:?}"),
            });
        }
        Ok(tree)
    }
}

fn parse_group(tokens: &[(usize, char)], pos: &mut usize) -> Result<Bracketing, BracketError> {
    let mut items = Vec::new();
    while let Some(&(position, c)) = tokens.get(*pos) {
        match c {
            '-' | '−' => {
                *pos += 1;
                items.push((position, Bracketing::Dash));
            }
            '(' => {
                *pos += 1;
                let inner = parse_group(tokens, pos)?;
                match tokens.get(*pos) {
                    Some((_, ')')) => *pos += 1,
                    _ => {
                        return Err(BracketError::Parse {
                            position,
                            message: "unmatched '('".into(),
                        })
                    }
                }
                items.push((position, inner));
            }
            ')' => break,
            other => {
                return Err(BracketError::Parse {
                    position,
                    message: format!("unexpected {other:?}"),
                })
            }
        }
    }
    match items.len() {
        1 => Ok(items.pop().expect("one item").1),
        2 => {
            let r = items.pop().expect("two items").1;
            let l = items.pop().expect("two items").1;
            Ok(Bracketing::pair(l, r))
        }
        0 => Err(BracketError::Parse {
            position: tokens.get(*pos).map_or(usize::MAX, |t| t.0),
            message: "empty group".into(),
        }),
        _ => Err(BracketError::Parse {
            position: items[2].0,
            message: "a group may contain at most two items".into(),
        }),
    }
}

/// All bracketings of length `n`, ordered by the size of the left part.
pub fn enumerate_bracketings(n: usize) -> Result<Vec<Bracketing>, BracketError> {
    if n > MAX_ENUMERATION_LENGTH {
        return Err(BracketError::TooLong(n));
    }
    if n == 0 {
        return Ok(vec![Bracketing::Empty]);
    }
    let mut table: Vec<Vec<Bracketing>> = vec![Vec::new(), vec![Bracketing::Dash]];
    for len in 2..=n {
        let mut all = Vec::new();
        for k in 1..len {
            for l in &table[k] {
                for r in &table[len - k] {
                    all.push(Bracketing::pair(l.clone(), r.clone()));
                }
            }
        }
        table.push(all);
    }
    Ok(table.swap_remove(n))
}

pub fn left_normalized(n: usize) -> Result<Bracketing, BracketError> {
    if n == 0 {
        return Err(BracketError::ZeroLength);
    }
    Ok(Bracketing::left_normalized_or_empty(n))
}

/// Moves rewriting `tree` (located at `prefix`) to left-normalized form: while
/// the right child is a pair, rotate `x(yz) → (xy)z` at the node; once the
/// right child is a dash, continue in the left child.
fn moves_to_left_normal(tree: &Bracketing, prefix: &Address, out: &mut Vec<AssocMove>) {
    let mut current = tree.clone();
    let mut at = prefix.clone();
    loop {
        let Bracketing::Pair(_, r) = &current else {
            return;
        };
        if matches!(**r, Bracketing::Pair(..)) {
            let m = AssocMove::new(Address::root(), Direction::RightToLeft);
            current = current.apply_move(&m).expect("right child is a pair");
            out.push(AssocMove::new(at.clone(), Direction::RightToLeft));
        } else {
            let Bracketing::Pair(l, _) = current else {
                unreachable!()
            };
            current = *l;
            at = at.child(Step::L);
        }
    }
}

/// The canonical chain of moves from `from` to `to`: route through the
/// left-normalized bracketing, splitting the right factor first, then follow
/// the reversed route from `to`. Empty iff `from == to`.
pub fn associator_chain(
    from: &Bracketing,
    to: &Bracketing,
) -> Result<Vec<AssocMove>, BracketError> {
    if from.len() != to.len() {
        return Err(BracketError::LengthMismatch {
            left: from.len(),
            right: to.len(),
        });
    }
    if from == to {
        return Ok(Vec::new());
    }
    let mut chain = Vec::new();
    moves_to_left_normal(from, &Address::root(), &mut chain);
    let mut back = Vec::new();
    moves_to_left_normal(to, &Address::root(), &mut back);
    chain.extend(back.iter().rev().map(AssocMove::inverse));
    Ok(chain)
}

/// A chain from `from` to `to` that treats the leaves `frozen.0 .. frozen.0 +
/// frozen.1` as one opaque leaf. Moves are expressed in the uncollapsed trees,
/// and none lies inside the frozen subtree.
pub fn chain_with_frozen_segment(
    from: &Bracketing,
    to: &Bracketing,
    frozen: (usize, usize),
) -> Result<Vec<AssocMove>, BracketError> {
    if from.len() != to.len() {
        return Err(BracketError::LengthMismatch {
            left: from.len(),
            right: to.len(),
        });
    }
    let (start, len) = frozen;
    let (from_collapsed, from_at) = from.collapse_interval(start, len)?;
    let (to_collapsed, to_at) = to.collapse_interval(start, len)?;
    let from_inner = from.subtree(&from_at).expect("address from interval");
    let to_inner = to.subtree(&to_at).expect("address from interval");
    if from_inner != to_inner {
        return Err(BracketError::FrozenShapeDiffers {
            left: from_inner.clone(),
            right: to_inner.clone(),
        });
    }
    // A move's redex never reaches into a leaf, so addresses in the collapsed
    // tree are valid unchanged in the expanded one.
    associator_chain(&from_collapsed, &to_collapsed)
}

/// A shortest chain in the rotation graph of bracketings of the common length,
/// found by breadth-first search. Ties are broken by the order of
/// [`Bracketing::available_moves`].
pub fn shortest_chain(from: &Bracketing, to: &Bracketing) -> Result<Vec<AssocMove>, BracketError> {
    if from.len() != to.len() {
        return Err(BracketError::LengthMismatch {
            left: from.len(),
            right: to.len(),
        });
    }
    if from.len() > MAX_ENUMERATION_LENGTH {
        return Err(BracketError::TooLong(from.len()));
    }
    let mut parent: BTreeMap<Bracketing, Option<(Bracketing, AssocMove)>> = BTreeMap::new();
    parent.insert(from.clone(), None);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(b) = queue.pop_front() {
        if &b == to {
            break;
        }
        for m in b.available_moves() {
            let next = b.apply_move(&m).expect("available move applies");
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((b.clone(), m)));
                queue.push_back(next);
            }
        }
    }
    let mut chain = Vec::new();
    let mut cursor = to.clone();
    while let Some(Some((prev, m))) = parent.get(&cursor) {
        chain.push(m.clone());
        cursor = prev.clone();
    }
    chain.reverse();
    Ok(chain)
}
