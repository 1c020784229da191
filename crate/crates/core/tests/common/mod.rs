#![allow(dead_code)]

use permoptics::photonic::ThermalBank;
use permoptics::{ComplexMatrix, UnitaryMatrix};

/// One printed row: 3-decimal unitary, mean photon numbers, exact and
/// no-interference permanents as printed.
pub struct TableRow {
    pub u: Vec<Vec<f64>>,
    pub mus: Vec<f64>,
    pub perm_exact: f64,
    pub no_interference: f64,
    /// Half-width of two units in the last printed digit.
    pub tolerance: f64,
}

pub fn table_rows() -> Vec<TableRow> {
    vec![
        TableRow {
            u: vec![vec![0.707, 0.709], vec![-0.707, 0.705]],
            mus: vec![1.00e-3, 1.04e-3],
            perm_exact: 1.04e-6,
            no_interference: 1.56e-6,
            tolerance: 0.02e-6,
        },
        TableRow {
            u: vec![vec![0.494, 0.864], vec![-0.870, 0.503]],
            mus: vec![1.25e-3, 1.92e-3],
            perm_exact: 2.58e-6,
            no_interference: 3.50e-6,
            tolerance: 0.02e-6,
        },
        TableRow {
            u: vec![
                vec![-0.635, 0.775, 0.031, 0.045],
                vec![-0.442, -0.369, -0.513, 0.629],
                vec![0.634, 0.513, -0.365, 0.462],
                vec![0.021, 0.019, 0.776, 0.624],
            ],
            mus: vec![1.66e-3, 2.13e-3, 3.11e-3, 1.40e-3],
            perm_exact: 21.4e-12,
            no_interference: 49.4e-12,
            tolerance: 0.2e-12,
        },
        TableRow {
            u: vec![
                vec![-0.632, 0.775, 0.038, 0.045],
                vec![-0.441, -0.369, -0.517, 0.629],
                vec![0.636, 0.513, -0.359, 0.462],
                vec![0.022, 0.017, 0.776, 0.623],
            ],
            mus: vec![1.57e-3, 2.60e-3, 2.03e-3, 1.40e-3],
            perm_exact: 14.3e-12,
            no_interference: 33.7e-12,
            tolerance: 0.2e-12,
        },
    ]
}

impl TableRow {
    pub fn unitary(&self) -> UnitaryMatrix {
        UnitaryMatrix::experimental(ComplexMatrix::from_real_rows(&self.u).unwrap()).unwrap()
    }

    pub fn bank(&self) -> ThermalBank {
        ThermalBank::lossless(self.mus.clone()).unwrap()
    }
}
