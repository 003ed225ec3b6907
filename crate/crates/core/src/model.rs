//! Domain types: instances, emission factors, solutions, and validation.

use std::fmt;
use std::ops::{Index, IndexMut};

/// Dense row-major matrix of reals, indexed `(row, col)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from nested rows. Returns `None` on ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Option<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return None;
            }
            data.extend_from_slice(row);
        }
        Some(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionCenter {
    /// `a_i`
    pub capacity: f64,
    /// `f_i`
    pub opening_cost: f64,
    /// `c_i`, per unit shipped from the manufacturer.
    pub unit_transport_cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Customer {
    /// `b_j`
    pub demand: f64,
}

/// A problem instance with `m` centers and `n` customers.
///
/// Fields are public and unchecked; run [`validate_instance`] before handing
/// user-supplied data to the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub centers: Vec<DistributionCenter>,
    pub customers: Vec<Customer>,
    /// `f_ij`, m×n
    pub edge_fixed_cost: Matrix,
    /// `c_ij`, m×n
    pub edge_unit_cost: Matrix,
}

impl Instance {
    pub fn num_centers(&self) -> usize {
        self.centers.len()
    }

    pub fn num_customers(&self) -> usize {
        self.customers.len()
    }

    pub fn total_capacity(&self) -> f64 {
        self.centers.iter().map(|c| c.capacity).sum()
    }

    pub fn total_demand(&self) -> f64 {
        self.customers.iter().map(|c| c.demand).sum()
    }

    /// True when every center alone can serve the whole demand.
    pub fn has_slack_capacity(&self) -> bool {
        let demand = self.total_demand();
        self.centers.iter().all(|c| c.capacity >= demand)
    }
}

/// A per-center emission factor, stored either as one shared value or one
/// value per center.
#[derive(Debug, Clone, PartialEq)]
pub enum CenterFactor {
    Uniform(f64),
    PerCenter(Vec<f64>),
}

impl CenterFactor {
    pub fn at(&self, i: usize) -> f64 {
        match self {
            CenterFactor::Uniform(v) => *v,
            CenterFactor::PerCenter(v) => v[i],
        }
    }

    /// The shared value, if all entries are equal.
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            CenterFactor::Uniform(v) => Some(*v),
            CenterFactor::PerCenter(v) => uniform_value(v),
        }
    }

    fn values(&self) -> &[f64] {
        match self {
            CenterFactor::Uniform(v) => std::slice::from_ref(v),
            CenterFactor::PerCenter(v) => v,
        }
    }
}

/// A per-edge emission factor, shared or given as an m×n matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeFactor {
    Uniform(f64),
    PerEdge(Matrix),
}

impl EdgeFactor {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        match self {
            EdgeFactor::Uniform(v) => *v,
            EdgeFactor::PerEdge(m) => m[(i, j)],
        }
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            EdgeFactor::Uniform(v) => Some(*v),
            EdgeFactor::PerEdge(m) => uniform_value(m.as_slice()),
        }
    }

    fn values(&self) -> &[f64] {
        match self {
            EdgeFactor::Uniform(v) => std::slice::from_ref(v),
            EdgeFactor::PerEdge(m) => m.as_slice(),
        }
    }
}

fn uniform_value(values: &[f64]) -> Option<f64> {
    let first = *values.first()?;
    values.iter().all(|&v| v == first).then_some(first)
}

/// Emission factors (tons CO2e) and the cap they are checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionParams {
    /// `α'`, per unit leaving the manufacturer.
    pub alpha_manufacturer: f64,
    /// `α_i`, per unit handled at center i.
    pub alpha_center: CenterFactor,
    /// `β'_i`, per unit of cost-distance per unit on the manufacturer→center link.
    pub beta_manufacturer: CenterFactor,
    /// `β_ij`, per unit of cost-distance per unit on the center→customer edge.
    pub beta_edge: EdgeFactor,
    pub ghg_cap: f64,
}

impl EmissionParams {
    /// Scalar shorthand: all α equal, all β equal per stage.
    pub fn uniform(alpha_man: f64, alpha: f64, beta_man: f64, beta: f64, ghg_cap: f64) -> Self {
        EmissionParams {
            alpha_manufacturer: alpha_man,
            alpha_center: CenterFactor::Uniform(alpha),
            beta_manufacturer: CenterFactor::Uniform(beta_man),
            beta_edge: EdgeFactor::Uniform(beta),
            ghg_cap,
        }
    }

    /// The experimental defaults: α' = α = 0.02, β' = β = 0.04, cap 150,000.
    pub fn benchmark_defaults() -> Self {
        Self::uniform(0.02, 0.02, 0.04, 0.04, 150_000.0)
    }

    /// `(α', α, β', β, cap)` when every factor collapses to a single value.
    pub fn as_scalars(&self) -> Option<(f64, f64, f64, f64, f64)> {
        Some((
            self.alpha_manufacturer,
            self.alpha_center.as_scalar()?,
            self.beta_manufacturer.as_scalar()?,
            self.beta_edge.as_scalar()?,
            self.ghg_cap,
        ))
    }

    pub fn is_valid(&self) -> bool {
        let factors_ok = std::iter::once(self.alpha_manufacturer)
            .chain(self.alpha_center.values().iter().copied())
            .chain(self.beta_manufacturer.values().iter().copied())
            .chain(self.beta_edge.values().iter().copied())
            .all(|v| v >= 0.0);
        factors_ok && self.ghg_cap > 0.0
    }
}

/// A shipment plan: `x_ij` for every center i and customer j.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub flow: Matrix,
}

impl Solution {
    pub fn new(flow: Matrix) -> Self {
        Solution { flow }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Solution {
            flow: Matrix::zeros(m, n),
        }
    }

    pub fn num_centers(&self) -> usize {
        self.flow.rows()
    }

    pub fn num_customers(&self) -> usize {
        self.flow.cols()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NegativeValue,
    CapacityShortfall,
    ShapeMismatch,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::NegativeValue => "negative_value",
            ViolationKind::CapacityShortfall => "capacity_shortfall",
            ViolationKind::ShapeMismatch => "shape_mismatch",
        })
    }
}

/// Where a violation sits. Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Instance,
    Center(usize),
    Customer(usize),
    Edge(usize, usize),
    /// One of the two m×n matrices.
    Matrix(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.kind, v.message)?;
        }
        Ok(())
    }
}

/// Collects every invariant violation of `instance`. Never fails; an empty
/// report means the instance is well-formed.
pub fn validate_instance(instance: &Instance) -> ValidationReport {
    let m = instance.num_centers();
    let n = instance.num_customers();
    let mut violations = Vec::new();
    let mut negative = |location: Location, what: String, value: f64| {
        if value.is_nan() || value < 0.0 {
            violations.push(Violation {
                kind: ViolationKind::NegativeValue,
                location,
                message: format!("{what} = {value} is negative"),
            });
        }
    };

    for (i, c) in instance.centers.iter().enumerate() {
        negative(Location::Center(i), format!("capacity[{i}]"), c.capacity);
        negative(Location::Center(i), format!("opening[{i}]"), c.opening_cost);
        negative(Location::Center(i), format!("unitcost[{i}]"), c.unit_transport_cost);
    }
    for (j, c) in instance.customers.iter().enumerate() {
        negative(Location::Customer(j), format!("demand[{j}]"), c.demand);
    }

    for (name, mat) in [("fixed", &instance.edge_fixed_cost), ("cost", &instance.edge_unit_cost)] {
        if mat.shape() != (m, n) {
            violations.push(Violation {
                kind: ViolationKind::ShapeMismatch,
                location: Location::Matrix(name),
                message: format!("{name} matrix is {}x{}, expected {m}x{n}", mat.rows(), mat.cols()),
            });
            continue;
        }
        for i in 0..m {
            for j in 0..n {
                let v = mat[(i, j)];
                if v.is_nan() || v < 0.0 {
                    violations.push(Violation {
                        kind: ViolationKind::NegativeValue,
                        location: Location::Edge(i, j),
                        message: format!("{name}[{i}][{j}] = {v} is negative"),
                    });
                }
            }
        }
    }

    let capacity = instance.total_capacity();
    let demand = instance.total_demand();
    if capacity < demand {
        violations.push(Violation {
            kind: ViolationKind::CapacityShortfall,
            location: Location::Instance,
            message: format!("total capacity {capacity} is below total demand {demand}"),
        });
    }

    ValidationReport { violations }
}
