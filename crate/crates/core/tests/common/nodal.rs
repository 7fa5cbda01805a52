//! Brute-force per-unit nodal solver used as an independent reference for
//! the fault solver. The faulted bus is the reference node (V = 0); every
//! other node voltage comes from solving Y V = I directly.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub const S_BASE_VA: f64 = 1.0e6;

pub fn z_base(v_ll: f64) -> f64 {
    v_ll * v_ll / S_BASE_VA
}

pub fn i_base(v_ll: f64) -> f64 {
    S_BASE_VA / (3f64.sqrt() * v_ll)
}

/// Source impedance in per unit from a short-circuit rating and X/R.
pub fn source_z_pu(v_ll: f64, isc_a: f64, x_over_r: f64) -> C {
    let mag = v_ll / (3f64.sqrt() * isc_a) / z_base(v_ll);
    let r = mag / (1.0 + x_over_r * x_over_r).sqrt();
    C::new(r, r * x_over_r)
}

/// Transformer impedance in per unit on the system base.
pub fn transformer_z_pu(rated_va: f64, pct: f64, x_over_r: f64) -> C {
    let mag = pct / 100.0 * S_BASE_VA / rated_va;
    let r = mag / (1.0 + x_over_r * x_over_r).sqrt();
    C::new(r, r * x_over_r)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Node {
    Fault,
    N(usize),
}

/// A network with the faulted bus as reference.
pub struct Nodal {
    n: usize,
    branches: Vec<(Node, Node, C)>,
    // Norton equivalents of voltage sources: (node, E, Z)
    thevenin: Vec<(Node, C, C)>,
    injections: Vec<(Node, C)>,
}

impl Nodal {
    pub fn new(n: usize) -> Self {
        Nodal {
            n,
            branches: vec![],
            thevenin: vec![],
            injections: vec![],
        }
    }

    pub fn branch(&mut self, a: Node, b: Node, z: C) -> &mut Self {
        self.branches.push((a, b, z));
        self
    }

    pub fn voltage_source(&mut self, at: Node, e: C, z: C) -> &mut Self {
        self.thevenin.push((at, e, z));
        self
    }

    pub fn current_source(&mut self, at: Node, i: C) -> &mut Self {
        self.injections.push((at, i));
        self
    }

    fn voltages(&self) -> Vec<C> {
        let n = self.n;
        let mut y = vec![vec![C::new(0.0, 0.0); n]; n];
        let mut rhs = vec![C::new(0.0, 0.0); n];
        for &(a, b, z) in &self.branches {
            let g = z.inv();
            if let Node::N(i) = a {
                y[i][i] += g;
            }
            if let Node::N(j) = b {
                y[j][j] += g;
            }
            if let (Node::N(i), Node::N(j)) = (a, b) {
                y[i][j] -= g;
                y[j][i] -= g;
            }
        }
        for &(at, e, z) in &self.thevenin {
            if let Node::N(i) = at {
                y[i][i] += z.inv();
                rhs[i] += e / z;
            }
        }
        for &(at, i_inj) in &self.injections {
            if let Node::N(i) = at {
                rhs[i] += i_inj;
            }
        }
        solve(y, rhs)
    }

    /// Total current flowing into the faulted node, in per unit.
    pub fn fault_current(&self) -> C {
        let v = self.voltages();
        let volt = |node: Node| match node {
            Node::Fault => C::new(0.0, 0.0),
            Node::N(i) => v[i],
        };
        let mut total = C::new(0.0, 0.0);
        for &(a, b, z) in &self.branches {
            if b == Node::Fault {
                total += volt(a) / z;
            } else if a == Node::Fault {
                total += volt(b) / z;
            }
        }
        for &(at, e, z) in &self.thevenin {
            if at == Node::Fault {
                total += e / z;
            }
        }
        for &(at, i) in &self.injections {
            if at == Node::Fault {
                total += i;
            }
        }
        total
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<C>>, mut b: Vec<C>) -> Vec<C> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        assert!(a[col][col].norm() > 1e-300, "singular nodal matrix");
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (x, &t) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * t;
            }
            let t = b[col];
            b[row] -= f * t;
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    x
}
