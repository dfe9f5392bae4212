//! Discretized measure spaces, simple functions, the domain classification
//! and the two partition constructions.
//!
//! A [`MeasureSpace`] is a finite list of continuous cells followed by a finite
//! list of atoms. Points are addressed by a flat index: cells first, then
//! atoms. Non-atomicity of the cell part is modelled by splitting: a cell may be
//! replaced by several equal-mass copies sharing its representative.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::young::MusielakOrlicz;

/// Upper limit on the number of pieces a partition may produce.
pub const MAX_PIECES: usize = 1_000_000;

/// A location at which a Musielak–Orlicz function is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub t: f64,
    /// Mass of the atom, `None` for a point of the continuous part.
    pub atom_mass: Option<f64>,
}

impl Point {
    pub fn cell(t: f64) -> Self {
        Point { t, atom_mass: None }
    }

    pub fn atom(t: f64, mass: f64) -> Self {
        Point { t, atom_mass: Some(mass) }
    }

    pub fn is_atom(&self) -> bool {
        self.atom_mass.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub rep: f64,
    pub mass: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub omega: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpace {
    cells: Vec<Cell>,
    atoms: Vec<Atom>,
}

fn check_mass(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "mass", value: m })
    }
}

impl MeasureSpace {
    /// Cell representatives may repeat (split cells); atoms must be distinct
    /// from each other and from every representative.
    pub fn new(cells: Vec<Cell>, atoms: Vec<Atom>) -> Result<Self> {
        for c in &cells {
            check_mass(c.mass)?;
            if !c.rep.is_finite() {
                return Err(Error::Domain { what: "cell representative", value: c.rep });
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            check_mass(a.mass)?;
            if !a.omega.is_finite() {
                return Err(Error::Domain { what: "atom location", value: a.omega });
            }
            if atoms[..i].iter().any(|b| b.omega == a.omega) || cells.iter().any(|c| c.rep == a.omega) {
                return Err(Error::precondition(format!("atom at {} is not distinct", a.omega)));
            }
        }
        Ok(MeasureSpace { cells, atoms })
    }

    /// `n` equal cells covering `[lo, hi)`, each represented by its midpoint.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() || n == 0 {
            return Err(Error::precondition(format!("uniform({lo}, {hi}, {n})")));
        }
        let h = (hi - lo) / n as f64;
        let cells = (0..n)
            .map(|i| Cell { rep: lo + (i as f64 + 0.5) * h, mass: h })
            .collect();
        MeasureSpace::new(cells, Vec::new())
    }

    /// Same space with extra atoms appended.
    pub fn with_atoms(self, atoms: Vec<Atom>) -> Result<Self> {
        let mut all = self.atoms;
        all.extend(atoms);
        MeasureSpace::new(self.cells, all)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn len(&self) -> usize {
        self.cells.len() + self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize) -> Point {
        if i < self.cells.len() {
            Point::cell(self.cells[i].rep)
        } else {
            let a = self.atoms[i - self.cells.len()];
            Point::atom(a.omega, a.mass)
        }
    }

    pub fn mass(&self, i: usize) -> f64 {
        if i < self.cells.len() {
            self.cells[i].mass
        } else {
            self.atoms[i - self.cells.len()].mass
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn total_mass(&self) -> f64 {
        (0..self.len()).map(|i| self.mass(i)).sum()
    }

    /// Replaces cell `i` by `m` copies of mass `mass / m`. The copies take the
    /// place of the original, so later indices shift by `m - 1`.
    pub fn split_cell(&self, i: usize, m: usize) -> Result<Self> {
        if i >= self.cells.len() || m == 0 {
            return Err(Error::precondition(format!("cannot split cell {i} into {m}")));
        }
        let c = self.cells[i];
        let mut cells = Vec::with_capacity(self.cells.len() + m - 1);
        cells.extend_from_slice(&self.cells[..i]);
        cells.extend(core::iter::repeat_n(Cell { rep: c.rep, mass: c.mass / m as f64 }, m));
        cells.extend_from_slice(&self.cells[i + 1..]);
        Ok(MeasureSpace { cells, atoms: self.atoms.clone() })
    }

    /// The subspace carried by `set`, with a map from its indices to ours.
    pub fn subspace(&self, set: &PointSet) -> Result<(MeasureSpace, Vec<usize>)> {
        set.check(self)?;
        let mut cells = Vec::new();
        let mut atoms = Vec::new();
        let mut cell_idx = Vec::new();
        let mut atom_idx = Vec::new();
        for &i in set.indices() {
            if i < self.cells.len() {
                cells.push(self.cells[i]);
                cell_idx.push(i);
            } else {
                atoms.push(self.atoms[i - self.cells.len()]);
                atom_idx.push(i);
            }
        }
        cell_idx.extend(atom_idx);
        Ok((MeasureSpace { cells, atoms }, cell_idx))
    }
}

/// A set of point indices of some space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    universe: usize,
    idx: Vec<usize>,
}

impl PointSet {
    pub fn new(space: &MeasureSpace, mut idx: Vec<usize>) -> Result<Self> {
        idx.sort_unstable();
        idx.dedup();
        if let Some(&last) = idx.last() {
            if last >= space.len() {
                return Err(Error::Misaligned { expected: space.len(), got: last + 1 });
            }
        }
        Ok(PointSet { universe: space.len(), idx })
    }

    pub fn full(space: &MeasureSpace) -> Self {
        PointSet { universe: space.len(), idx: (0..space.len()).collect() }
    }

    pub fn empty(space: &MeasureSpace) -> Self {
        PointSet { universe: space.len(), idx: Vec::new() }
    }

    pub fn from_predicate(space: &MeasureSpace, mut keep: impl FnMut(usize) -> bool) -> Self {
        PointSet { universe: space.len(), idx: (0..space.len()).filter(|&i| keep(i)).collect() }
    }

    fn check(&self, space: &MeasureSpace) -> Result<()> {
        if self.universe != space.len() {
            Err(Error::Misaligned { expected: space.len(), got: self.universe })
        } else {
            Ok(())
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.idx.binary_search(&i).is_ok()
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.idx.iter().all(|i| !other.contains(*i))
    }

    pub fn mass(&self, space: &MeasureSpace) -> f64 {
        self.idx.iter().map(|&i| space.mass(i)).sum()
    }
}

/// A step function on a [`MeasureSpace`]: one finite value per point.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleFunction {
    values: Vec<f64>,
}

impl SimpleFunction {
    /// Signed values are accepted; norms and modulars use `|x|`.
    pub fn new(space: &MeasureSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Misaligned { expected: space.len(), got: values.len() });
        }
        if let Some(&v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain { what: "simple function value", value: v });
        }
        Ok(SimpleFunction { values })
    }

    pub fn nonnegative(space: &MeasureSpace, values: Vec<f64>) -> Result<Self> {
        if let Some(&v) = values.iter().find(|v| **v < 0.0) {
            return Err(Error::Domain { what: "simple function value", value: v });
        }
        SimpleFunction::new(space, values)
    }

    pub fn zero(space: &MeasureSpace) -> Self {
        SimpleFunction { values: vec![0.0; space.len()] }
    }

    pub fn constant(space: &MeasureSpace, c: f64) -> Result<Self> {
        SimpleFunction::new(space, vec![c; space.len()])
    }

    pub fn indicator(space: &MeasureSpace, set: &PointSet) -> Result<Self> {
        set.check(space)?;
        let mut values = vec![0.0; space.len()];
        for &i in set.indices() {
            values[i] = 1.0;
        }
        Ok(SimpleFunction { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn check(&self, space: &MeasureSpace) -> Result<()> {
        if self.values.len() != space.len() {
            Err(Error::Misaligned { expected: space.len(), got: self.values.len() })
        } else {
            Ok(())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn abs(&self) -> Self {
        SimpleFunction { values: self.values.iter().map(|v| v.abs()).collect() }
    }

    pub fn scale(&self, c: f64) -> Self {
        SimpleFunction { values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        SimpleFunction { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn mul(&self, other: &SimpleFunction) -> Result<Self> {
        if other.values.len() != self.values.len() {
            return Err(Error::Misaligned { expected: self.values.len(), got: other.values.len() });
        }
        Ok(SimpleFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn support(&self, space: &MeasureSpace) -> Result<PointSet> {
        self.check(space)?;
        Ok(PointSet::from_predicate(space, |i| self.values[i] != 0.0))
    }

    /// `x` on `set`, zero elsewhere.
    pub fn restrict(&self, space: &MeasureSpace, set: &PointSet) -> Result<Self> {
        self.check(space)?;
        set.check(space)?;
        let mut values = vec![0.0; self.values.len()];
        for &i in set.indices() {
            values[i] = self.values[i];
        }
        Ok(SimpleFunction { values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Position of a point relative to the finiteness thresholds of `phi_1`
/// (first index) and `phi` (second index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// both thresholds infinite
    ZeroZero,
    /// `b_{phi_1}` infinite, `b_phi` finite
    ZeroInf,
    /// `b_{phi_1}` finite, `b_phi` infinite
    InfZero,
    /// both finite
    InfInf,
    Atom,
}

impl Label {
    pub fn from_thresholds(b1: ExtReal, b: ExtReal) -> Label {
        match (b1.is_infinite(), b.is_infinite()) {
            (true, true) => Label::ZeroZero,
            (true, false) => Label::ZeroInf,
            (false, true) => Label::InfZero,
            (false, false) => Label::InfInf,
        }
    }

    /// Member of `InfZero` or `InfInf`.
    pub fn is_inf(self) -> bool {
        matches!(self, Label::InfZero | Label::InfInf)
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::ZeroZero => "O00",
            Label::ZeroInf => "O0inf",
            Label::InfZero => "Oinf0",
            Label::InfInf => "Oinfinf",
            Label::Atom => "atom",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainClassification {
    labels: Vec<Label>,
    b_phi: Vec<ExtReal>,
    b_phi1: Vec<ExtReal>,
}

impl DomainClassification {
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn b_phi(&self, i: usize) -> ExtReal {
        self.b_phi[i]
    }

    pub fn b_phi1(&self, i: usize) -> ExtReal {
        self.b_phi1[i]
    }

    pub fn count(&self, l: Label) -> usize {
        self.labels.iter().filter(|x| **x == l).count()
    }

    pub fn set(&self, space: &MeasureSpace, keep: impl Fn(Label) -> bool) -> PointSet {
        PointSet::from_predicate(space, |i| keep(self.labels[i]))
    }
}

/// Labels every point of `space` by the finiteness of `b_{phi_1}` and `b_phi`.
///
/// Fails when `b_{phi_1}` vanishes at some point, i.e. when `L^{phi_1}` is
/// not supported on the whole space.
pub fn classify<F, G>(space: &MeasureSpace, phi: &F, phi1: &G) -> Result<DomainClassification>
where
    F: MusielakOrlicz + ?Sized,
    G: MusielakOrlicz + ?Sized,
{
    let n = space.len();
    let mut labels = Vec::with_capacity(n);
    let mut b_phi = Vec::with_capacity(n);
    let mut b_phi1 = Vec::with_capacity(n);
    for i in 0..n {
        let p = space.point(i);
        let b1 = phi1.b_param(&p)?;
        if b1.is_zero() {
            return Err(Error::precondition(format!(
                "b of phi_1 vanishes at point #{i} (t = {}): L^phi_1 is not supported everywhere",
                p.t
            )));
        }
        let b = phi.b_param(&p)?;
        labels.push(if p.is_atom() { Label::Atom } else { Label::from_thresholds(b1, b) });
        b_phi.push(b);
        b_phi1.push(b1);
    }
    Ok(DomainClassification { labels, b_phi, b_phi1 })
}

/// Output of a partition construction.
#[derive(Clone, Debug)]
pub struct Partition {
    /// The input space with cells split as needed.
    pub space: MeasureSpace,
    /// Pairwise disjoint sets of indices into `space`, covering it.
    pub sets: Vec<PointSet>,
    /// For each point of `space`, the index of the input cell it came from.
    pub origin: Vec<usize>,
    /// Guaranteed upper bound on the norm of the indicator of each set.
    pub bounds: Vec<f64>,
}

struct Layered {
    /// (layer key, n, cell index)
    entries: Vec<((i64, u64), u64, usize)>,
}

fn build_partition(space: &MeasureSpace, layered: Layered, bound_of: impl Fn(&[usize]) -> f64) -> Result<Partition> {
    let mut entries = layered.entries;
    entries.sort_by(|x, y| x.0.cmp(&y.0).then(x.2.cmp(&y.2)));
    let mut pieces_total: usize = 0;
    for &(_, n, i) in &entries {
        let k = libm::ceil(space.mass(i) * n as f64).max(1.0);
        if !(k < MAX_PIECES as f64) {
            return Err(Error::PartitionTooFine { pieces: usize::MAX });
        }
        pieces_total = pieces_total.saturating_add(k as usize);
        if pieces_total > MAX_PIECES {
            return Err(Error::PartitionTooFine { pieces: pieces_total });
        }
    }
    let mut cells = Vec::with_capacity(pieces_total);
    let mut origin = Vec::with_capacity(pieces_total);
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut bounds = Vec::new();
    let mut e = 0;
    while e < entries.len() {
        let key = entries[e].0;
        let n = entries[e].1;
        let cap = 1.0 / n as f64;
        // first-fit bins for this layer: (members, load)
        let mut bins: Vec<(Vec<usize>, f64, Vec<usize>)> = Vec::new();
        while e < entries.len() && entries[e].0 == key {
            let i = entries[e].2;
            let c = space.cells[i];
            let k = libm::ceil(c.mass * n as f64).max(1.0) as usize;
            let mut piece = c.mass / k as f64;
            if piece > cap {
                piece = cap;
            }
            let last = c.mass - piece * (k - 1) as f64;
            for j in 0..k {
                let m = if j + 1 == k { last } else { piece };
                let idx = cells.len();
                cells.push(Cell { rep: c.rep, mass: m });
                origin.push(i);
                match bins.iter_mut().find(|b| b.1 + m <= cap) {
                    Some(b) => {
                        b.0.push(idx);
                        b.1 += m;
                        b.2.push(i);
                    }
                    None => bins.push((vec![idx], m, vec![i])),
                }
            }
            e += 1;
        }
        for (members, _, orig) in bins {
            bounds.push(bound_of(&orig));
            sets.push(members);
        }
    }
    let new_space = MeasureSpace { cells, atoms: Vec::new() };
    let sets = sets
        .into_iter()
        .map(|idx| PointSet::new(&new_space, idx))
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition { space: new_space, sets, origin, bounds })
}

fn no_atoms(space: &MeasureSpace) -> Result<()> {
    if space.atoms.is_empty() {
        Ok(())
    } else {
        Err(Error::precondition("partitions act on the continuous part only"))
    }
}

fn layer_of(v: ExtReal, i: usize, t: f64) -> Result<u64> {
    if v.is_infinite() {
        return Err(Error::precondition(format!("infinite value at cell #{i} (t = {t})")));
    }
    let n = libm::floor(v.value()) + 1.0;
    if n > 1e18 {
        return Err(Error::PartitionTooFine { pieces: usize::MAX });
    }
    Ok(n as u64)
}

/// Splits a space on which `b_phi` is infinite into pieces whose indicators
/// have norm at most `1 / a`.
///
/// Cells are grouped by `n` with `n - 1 <= phi(t, a) < n` and packed into
/// sets of mass at most `1 / n`, splitting cells where needed.
pub fn partition_unbounded<F>(space: &MeasureSpace, phi: &F, a: f64) -> Result<Partition>
where
    F: MusielakOrlicz + ?Sized,
{
    if !(a > 0.0) || a.is_infinite() {
        return Err(Error::Domain { what: "partition level a", value: a });
    }
    no_atoms(space)?;
    let mut entries = Vec::with_capacity(space.n_cells());
    for (i, c) in space.cells.iter().enumerate() {
        let p = Point::cell(c.rep);
        if phi.b_param(&p)?.is_finite() {
            return Err(Error::precondition(format!("b_phi is finite at cell #{i} (t = {})", c.rep)));
        }
        let n = layer_of(phi.eval(&p, a)?, i, c.rep)?;
        entries.push(((0, n), n, i));
    }
    build_partition(space, Layered { entries }, |_| 1.0 / a)
}

/// Splits a space on which `0 < b_phi < inf` into pieces `A` whose indicators
/// have norm at most `2 / max_A b_phi`.
///
/// Cells are grouped by the dyadic `k` with `2^(k-1) < b_phi <= 2^k`, then by
/// `n` with `n - 1 <= phi(t, 2^(k-1)) < n`, and packed into sets of mass at
/// most `1 / n`.
pub fn partition_bounded<F>(space: &MeasureSpace, phi: &F) -> Result<Partition>
where
    F: MusielakOrlicz + ?Sized,
{
    no_atoms(space)?;
    let mut entries = Vec::with_capacity(space.n_cells());
    let mut bs = Vec::with_capacity(space.n_cells());
    for (i, c) in space.cells.iter().enumerate() {
        let p = Point::cell(c.rep);
        let b = phi.b_param(&p)?;
        if b.is_zero() || b.is_infinite() {
            return Err(Error::precondition(format!("b_phi = {b} at cell #{i} (t = {})", c.rep)));
        }
        let b = b.value();
        let mut k = libm::ceil(libm::log2(b)) as i64;
        while libm::exp2(k as f64) < b {
            k += 1;
        }
        while libm::exp2((k - 1) as f64) >= b {
            k -= 1;
        }
        let n = layer_of(phi.eval(&p, libm::exp2((k - 1) as f64))?, i, c.rep)?;
        entries.push(((k, n), n, i));
        bs.push(b);
    }
    build_partition(space, Layered { entries }, |orig| {
        2.0 / orig.iter().fold(0.0_f64, |m, &i| m.max(bs[i]))
    })
}
