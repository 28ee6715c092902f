//! Down-right paths, the Ferrers shapes they enclose, fillings and weight
//! matrices, plus the chain predicates used by last passage times.
//!
//! Path vertices are lattice points `(x, y)`. A shape cell `(i, j)` is the
//! unit box whose north-east corner is the vertex `(i, j)`; row `j = 1` is the
//! bottom row and is the longest, so a shape is stored as the partition of its
//! row lengths and shares the [`Cell`] convention of [`crate::partition`].
//!
//! Weight matrices use the same `(col, row)` indexing with row 1 at the
//! bottom, so up-right paths and NE-chains move towards larger coordinates.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::{Cell, Partition};

pub type Vertex = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    D,
    R,
}

impl Step {
    pub fn letter(self) -> char {
        match self {
            Step::D => 'D',
            Step::R => 'R',
        }
    }

    pub fn flipped(self) -> Step {
        match self {
            Step::D => Step::R,
            Step::R => Step::D,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DownRightPath {
    start: Vertex,
    word: Vec<Step>,
}

impl DownRightPath {
    pub fn new(start: Vertex, word: Vec<Step>) -> Result<Self> {
        let mut y = start.1;
        for (i, step) in word.iter().enumerate() {
            if *step == Step::D {
                y = y.checked_sub(1).ok_or(Error::NegativeCoordinate { index: i + 1 })?;
            }
        }
        Ok(DownRightPath { start, word })
    }

    pub fn start(&self) -> Vertex {
        self.start
    }

    pub fn word(&self) -> &[Step] {
        &self.word
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|s| s.letter()).collect()
    }

    /// Number of steps; the path has `len() + 1` vertices.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn count(&self, step: Step) -> usize {
        self.word.iter().filter(|&&s| s == step).count()
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        let (mut x, mut y) = self.start;
        for step in &self.word[..i] {
            match step {
                Step::R => x += 1,
                Step::D => y -= 1,
            }
        }
        (x, y)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.word.len() + 1);
        let (mut x, mut y) = self.start;
        out.push((x, y));
        for step in &self.word {
            match step {
                Step::R => x += 1,
                Step::D => y -= 1,
            }
            out.push((x, y));
        }
        out
    }

    pub fn end(&self) -> Vertex {
        (self.start.0 + self.count(Step::R), self.start.1 - self.count(Step::D))
    }

    /// The vertex set is invariant under `(x, y) ↦ (y, x)`.
    pub fn is_symmetric(&self) -> bool {
        let set: BTreeSet<Vertex> = self.vertices().into_iter().collect();
        set.iter().all(|&(x, y)| set.contains(&(y, x)))
    }

    /// For a path from `(N, N)` to `(M + N, 0)`: the full-space path from
    /// `(0, N)` obtained by prepending `N` right steps.
    pub fn extended_from_axis(&self) -> Result<DownRightPath> {
        let (x0, y0) = self.start;
        if x0 != y0 || self.end().1 != 0 {
            return Err(Error::BadEndpoints(format!(
                "expected a path from (N,N) to (M+N,0), got {:?} to {:?}",
                self.start,
                self.end()
            )));
        }
        let mut word = vec![Step::R; x0];
        word.extend_from_slice(&self.word);
        DownRightPath::new((0, y0), word)
    }

    /// For a path from `(N, N)` to `(M + N, 0)`: the symmetric path from
    /// `(0, M + N)` whose second half is `self`.
    pub fn symmetric_completion(&self) -> Result<DownRightPath> {
        let (x0, y0) = self.start;
        if x0 != y0 || self.end().1 != 0 {
            return Err(Error::BadEndpoints(format!(
                "expected a path from (N,N) to (M+N,0), got {:?} to {:?}",
                self.start,
                self.end()
            )));
        }
        let mut word: Vec<Step> = self.word.iter().rev().map(|s| s.flipped()).collect();
        word.extend_from_slice(&self.word);
        DownRightPath::new((0, self.end().0), word)
    }
}

impl fmt::Display for DownRightPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}):{}", self.start.0, self.start.1, self.word_string())
    }
}

pub fn parse_word(word: &str) -> Result<Vec<Step>> {
    word.trim()
        .chars()
        .map(|c| match c {
            'D' | 'd' => Ok(Step::D),
            'R' | 'r' => Ok(Step::R),
            other => Err(Error::Parse(format!("unexpected letter {other:?} in path word"))),
        })
        .collect()
}

pub fn path_from_word(start: Vertex, word: &str) -> Result<DownRightPath> {
    DownRightPath::new(start, parse_word(word)?)
}

impl FromStr for DownRightPath {
    type Err = Error;

    /// Parses `x,y:WORD`.
    fn from_str(s: &str) -> Result<Self> {
        let (start, word) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected x,y:WORD, got {s:?}")))?;
        path_from_word(parse_vertex(start)?, word)
    }
}

pub fn parse_vertex(s: &str) -> Result<Vertex> {
    let (x, y) = s
        .trim()
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected x,y, got {s:?}")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad coordinate {t:?}")))
    };
    Ok((parse(x)?, parse(y)?))
}

#[derive(Serialize, Deserialize)]
struct PathRepr {
    start: [usize; 2],
    word: String,
}

impl Serialize for DownRightPath {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PathRepr { start: [self.start.0, self.start.1], word: self.word_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DownRightPath {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PathRepr::deserialize(d)?;
        path_from_word((repr.start[0], repr.start[1]), &repr.word).map_err(serde::de::Error::custom)
    }
}

/// A down-closed finite set of cells, stored by its row lengths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FerrersShape(Partition);

impl FerrersShape {
    pub fn from_rows(rows: Partition) -> Self {
        FerrersShape(rows)
    }

    pub fn rectangle(cols: usize, rows: usize) -> Self {
        FerrersShape(Partition::new(vec![cols as u64; if cols == 0 { 0 } else { rows }]).unwrap())
    }

    pub fn from_cells(cells: &BTreeSet<Cell>) -> Result<Self> {
        let shape = FerrersShape(crate::partition::min_diagram_containing(cells));
        if shape.len() != cells.len() {
            return Err(Error::NotFerrers);
        }
        Ok(shape)
    }

    pub fn rows(&self) -> &Partition {
        &self.0
    }

    pub fn row_len(&self, row: usize) -> usize {
        self.0.part(row) as usize
    }

    /// Number of rows.
    pub fn height(&self) -> usize {
        self.0.len()
    }

    /// Length of the bottom row.
    pub fn width(&self) -> usize {
        self.0.first() as usize
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.0.weight() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.0.contains_cell(cell)
    }

    /// Cells in row-major order: row 1 left to right, then row 2, ...
    pub fn cells(&self) -> Vec<Cell> {
        self.0.cells().collect()
    }

    pub fn cell_set(&self) -> BTreeSet<Cell> {
        self.0.cell_set()
    }

    pub fn is_symmetric(&self) -> bool {
        self.cells().iter().all(|c| self.contains(Cell::new(c.row, c.col)))
    }

    /// Cells `(a, b)` with `a > b`.
    pub fn strict_lower(&self) -> Vec<Cell> {
        self.cells().into_iter().filter(|c| c.col > c.row).collect()
    }

    /// The down-right path from `(0, n)` to `(m, 0)` that encloses this shape.
    pub fn boundary_path(&self, m: usize, n: usize) -> Result<DownRightPath> {
        if self.width() > m || self.height() > n {
            return Err(Error::BadEndpoints(format!(
                "shape {} does not fit in a {m}x{n} box",
                self.0
            )));
        }
        let mut word = Vec::with_capacity(m + n);
        let mut x = 0;
        for y in (1..=n).rev() {
            let target = self.row_len(y);
            word.extend(std::iter::repeat_n(Step::R, target - x));
            x = target;
            word.push(Step::D);
        }
        word.extend(std::iter::repeat_n(Step::R, m - x));
        DownRightPath::new((0, n), word)
    }
}

/// The Ferrers shape `Y(γ)` of a path from `(0, n)` to `(m, 0)`.
pub fn shape_of(path: &DownRightPath) -> Result<FerrersShape> {
    let (x0, _) = path.start();
    if x0 != 0 || path.end().1 != 0 {
        return Err(Error::BadEndpoints(format!(
            "expected a path from (0,n) to (m,0), got {:?} to {:?}",
            path.start(),
            path.end()
        )));
    }
    // Each D step from height y records the length of row y.
    let mut rows = vec![0u64; path.start().1];
    let mut x = 0;
    let mut y = path.start().1;
    for step in path.word() {
        match step {
            Step::R => x += 1,
            Step::D => {
                rows[y - 1] = x as u64;
                y -= 1;
            }
        }
    }
    Ok(FerrersShape(Partition::new(rows).expect("down-right paths give monotone rows")))
}

/// The region relevant to a half-space path from `(N, N)` to `(M + N, 0)`:
/// the shape enclosed by the path extended along `y = N` to the axis. It is
/// symmetric about the diagonal within its `N × N` corner.
pub fn half_space_region(path: &DownRightPath) -> Result<FerrersShape> {
    shape_of(&path.extended_from_axis()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrowthOrder {
    #[default]
    RowMajor,
    ColumnMajor,
}

/// Cells of `shape` in an order in which every prefix is itself a shape.
pub fn growth_order(shape: &FerrersShape, order: GrowthOrder) -> Vec<Cell> {
    match order {
        GrowthOrder::RowMajor => shape.cells(),
        GrowthOrder::ColumnMajor => {
            let mut cells = shape.cells();
            cells.sort_by_key(|c| (c.col, c.row));
            cells
        }
    }
}

/// The paths `γ_1, …, γ_r = γ` obtained by adding the cells of `Y(γ)` one at
/// a time in row-major order, each paired with the cell it adds.
pub fn elementary_growth_sequence(path: &DownRightPath) -> Result<Vec<(DownRightPath, Cell)>> {
    let shape = shape_of(path)?;
    let (m, n) = (path.end().0, path.start().1);
    let mut rows = vec![0u64; n];
    let mut out = Vec::with_capacity(shape.len());
    for cell in growth_order(&shape, GrowthOrder::RowMajor) {
        rows[cell.row - 1] = cell.col as u64;
        let prefix = FerrersShape(Partition::new(rows.clone())?);
        out.push((prefix.boundary_path(m, n)?, cell));
    }
    Ok(out)
}

/// Non-negative integer values on the cells of a Ferrers shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filling {
    shape: FerrersShape,
    rows: Vec<Vec<u64>>,
}

impl Filling {
    pub fn zeros(shape: FerrersShape) -> Self {
        let rows = (1..=shape.height()).map(|j| vec![0; shape.row_len(j)]).collect();
        Filling { shape, rows }
    }

    pub fn from_fn(shape: FerrersShape, mut f: impl FnMut(Cell) -> u64) -> Self {
        let rows = (1..=shape.height())
            .map(|j| (1..=shape.row_len(j)).map(|i| f(Cell::new(i, j))).collect())
            .collect();
        Filling { shape, rows }
    }

    /// `rows[j - 1][i - 1]` is the value at cell `(i, j)`.
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let lens: Vec<u64> = rows.iter().map(|r| r.len() as u64).collect();
        let shape = FerrersShape(Partition::new(lens).map_err(|_| Error::NotFerrers)?);
        if shape.height() != rows.len() {
            return Err(Error::NotFerrers);
        }
        Ok(Filling { shape, rows })
    }

    pub fn from_matrix(matrix: &WeightMatrix, shape: FerrersShape) -> Result<Self> {
        if shape.width() > matrix.cols() || shape.height() > matrix.rows() {
            return Err(Error::OutOfSupport(Cell::new(shape.width(), shape.height())));
        }
        Ok(Filling::from_fn(shape, |c| matrix.get(c)))
    }

    pub fn shape(&self) -> &FerrersShape {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn get(&self, cell: Cell) -> Option<u64> {
        if cell.col == 0 || cell.row == 0 {
            return None;
        }
        self.rows.get(cell.row - 1)?.get(cell.col - 1).copied()
    }

    pub fn set(&mut self, cell: Cell, value: u64) -> Result<()> {
        let slot = self
            .rows
            .get_mut(cell.row.wrapping_sub(1))
            .and_then(|r| r.get_mut(cell.col.wrapping_sub(1)))
            .ok_or(Error::OutOfSupport(cell))?;
        *slot = value;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().flatten().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.shape.is_symmetric()
            && self
                .shape
                .cells()
                .iter()
                .all(|&c| self.get(c) == self.get(Cell::new(c.row, c.col)))
    }
}

#[derive(Serialize, Deserialize)]
struct FillingRepr {
    shape: Partition,
    rows: Vec<Vec<u64>>,
}

impl Serialize for Filling {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FillingRepr { shape: self.shape.0.clone(), rows: self.rows.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Filling {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FillingRepr::deserialize(d)?;
        let filling = Filling::from_rows(repr.rows).map_err(serde::de::Error::custom)?;
        if filling.shape.0 != repr.shape {
            return Err(serde::de::Error::custom("row lengths disagree with the declared shape"));
        }
        Ok(filling)
    }
}

/// A dense `cols × rows` array of non-negative integers indexed by
/// `(col, row)`, both starting at 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightMatrix {
    cols: usize,
    rows: usize,
    entries: Vec<u64>,
}

impl WeightMatrix {
    pub fn zeros(cols: usize, rows: usize) -> Self {
        WeightMatrix { cols, rows, entries: vec![0; cols * rows] }
    }

    pub fn from_fn(cols: usize, rows: usize, mut f: impl FnMut(Cell) -> u64) -> Self {
        let mut entries = Vec::with_capacity(cols * rows);
        for j in 1..=rows {
            for i in 1..=cols {
                entries.push(f(Cell::new(i, j)));
            }
        }
        WeightMatrix { cols, rows, entries }
    }

    /// `rows[j - 1][i - 1]` is the entry at `(i, j)`; row 1 is listed first.
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::BadParameter("matrix rows have different lengths".into()));
        }
        let n = if cols == 0 { 0 } else { rows.len() };
        Ok(WeightMatrix { cols, rows: n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn in_support(&self, cell: Cell) -> bool {
        (1..=self.cols).contains(&cell.col) && (1..=self.rows).contains(&cell.row)
    }

    /// Entry at `cell`, zero outside the support.
    pub fn get(&self, cell: Cell) -> u64 {
        if self.in_support(cell) {
            self.entries[(cell.row - 1) * self.cols + cell.col - 1]
        } else {
            0
        }
    }

    pub fn try_get(&self, cell: Cell) -> Result<u64> {
        if self.in_support(cell) {
            Ok(self.get(cell))
        } else {
            Err(Error::OutOfSupport(cell))
        }
    }

    pub fn set(&mut self, cell: Cell, value: u64) -> Result<()> {
        if !self.in_support(cell) {
            return Err(Error::OutOfSupport(cell));
        }
        self.entries[(cell.row - 1) * self.cols + cell.col - 1] = value;
        Ok(())
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        if self.cols == 0 {
            return Vec::new();
        }
        self.entries.chunks(self.cols).map(<[u64]>::to_vec).collect()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn transpose(&self) -> WeightMatrix {
        WeightMatrix::from_fn(self.rows, self.cols, |c| self.get(Cell::new(c.row, c.col)))
    }

    /// The restriction to columns `1..=cols` and rows `1..=rows`.
    pub fn window(&self, cols: usize, rows: usize) -> WeightMatrix {
        WeightMatrix::from_fn(cols.min(self.cols), rows.min(self.rows), |c| self.get(c))
    }

    pub fn is_symmetric(&self) -> bool {
        self.cols == self.rows
            && (1..=self.cols).all(|i| (1..i).all(|j| self.get(Cell::new(i, j)) == self.get(Cell::new(j, i))))
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    cols: usize,
    rows: usize,
    entries: Vec<Vec<u64>>,
}

impl Serialize for WeightMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr { cols: self.cols, rows: self.rows, entries: self.row_vecs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let rows_given = repr.entries.len();
        let m = WeightMatrix::from_rows(repr.entries).map_err(serde::de::Error::custom)?;
        let dims_ok = if repr.cols == 0 || repr.rows == 0 {
            m.entries.is_empty()
        } else {
            m.cols == repr.cols && rows_given == repr.rows
        };
        if !dims_ok {
            return Err(serde::de::Error::custom("entries disagree with declared dimensions"));
        }
        Ok(WeightMatrix { cols: repr.cols, rows: repr.rows, entries: m.entries })
    }
}

/// Weakly increasing in both coordinates and never repeating a vertex.
pub fn is_ne_chain(vertices: &[Cell]) -> bool {
    vertices
        .windows(2)
        .all(|w| w[0].col <= w[1].col && w[0].row <= w[1].row && w[0] != w[1])
}

/// Consecutive vertices differ by `(1, 0)` or `(0, 1)`.
pub fn is_up_right(vertices: &[Cell]) -> bool {
    vertices.windows(2).all(|w| {
        (w[1].col == w[0].col + 1 && w[1].row == w[0].row)
            || (w[1].col == w[0].col && w[1].row == w[0].row + 1)
    })
}

pub fn chain_weight(matrix: &WeightMatrix, chain: &[Cell]) -> Result<u64> {
    chain.iter().map(|&c| matrix.try_get(c)).sum()
}

pub fn pairwise_disjoint(chains: &[Vec<Cell>]) -> bool {
    let mut seen = BTreeSet::new();
    chains.iter().flatten().all(|c| seen.insert(*c))
}
