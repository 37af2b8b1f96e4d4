//! JSON formats for modules, supports and decomposition reports.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decomp::DecompReport;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::linalg::Mat;
use crate::module::Module;
use crate::varieties::SupportSet;

/// Field elements are ascending `F_p` coefficient lists of length `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
    pub r: usize,
    pub dim: usize,
    pub generators: Vec<Vec<Vec<Vec<u32>>>>,
}

fn encode_mat(f: &Field, m: &Mat) -> Vec<Vec<Vec<u32>>> {
    (0..m.rows)
        .map(|i| m.row(i).iter().map(|&x| f.coeffs(x)).collect())
        .collect()
}

impl ModuleJson {
    pub fn from_module(m: &Module) -> ModuleJson {
        let f = &m.field;
        ModuleJson {
            p: f.p(),
            k: f.k(),
            modulus: f.modulus().to_vec(),
            r: m.r,
            dim: m.dim,
            generators: m.gens.iter().map(|g| encode_mat(f, g)).collect(),
        }
    }

    pub fn to_module(&self) -> Result<Module> {
        let f = Field::new(self.p, self.k)?;
        if f.modulus() != self.modulus.as_slice() {
            return Err(Error::InvalidField(format!(
                "modulus {:?} differs from the standard modulus {:?}",
                self.modulus,
                f.modulus()
            )));
        }
        if self.generators.len() != self.r {
            return Err(Error::InvalidModule(format!(
                "{} generators for r = {}",
                self.generators.len(),
                self.r
            )));
        }
        let mut gens = Vec::with_capacity(self.r);
        for g in &self.generators {
            if g.len() != self.dim || g.iter().any(|row| row.len() != self.dim) {
                return Err(Error::InvalidModule("generator is not dim x dim".into()));
            }
            let mut m = Mat::zeros(self.dim, self.dim);
            for (i, row) in g.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    m.set(i, j, f.from_coeffs(c)?);
                }
            }
            gens.push(m);
        }
        Module::new(&f, self.r, self.dim, gens)
    }
}

pub fn module_to_json(m: &Module) -> String {
    serde_json::to_string(&ModuleJson::from_module(m)).expect("module serializes")
}

pub fn module_from_json(s: &str) -> Result<Module> {
    let mj: ModuleJson = serde_json::from_str(s)?;
    mj.to_module()
}

pub fn write_module(path: &Path, m: &Module) -> Result<()> {
    fs::write(path, module_to_json(m))?;
    Ok(())
}

pub fn read_module(path: &Path) -> Result<Module> {
    module_from_json(&fs::read_to_string(path)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportJson {
    pub e: u32,
    pub points: Vec<Vec<Vec<u32>>>,
}

pub fn support_to_json(s: &SupportSet) -> SupportJson {
    SupportJson {
        e: s.e,
        points: s
            .points
            .iter()
            .map(|pt| pt.coords.iter().map(|&x| s.field.coeffs(x)).collect())
            .collect(),
    }
}

/// Coordinates of each point as field elements of `f`.
pub fn points_from_json(f: &Field, sj: &SupportJson) -> Result<Vec<Vec<Fe>>> {
    sj.points
        .iter()
        .map(|pt| pt.iter().map(|c| f.from_coeffs(c)).collect::<Result<Vec<_>>>())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandJson {
    pub dim: usize,
    pub multiplicity: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompJson {
    pub p: u32,
    pub k: u32,
    pub field_extended: bool,
    pub summands: Vec<SummandJson>,
}

pub fn decomp_to_json(d: &DecompReport) -> DecompJson {
    DecompJson {
        p: d.field.p(),
        k: d.field.k(),
        field_extended: d.field_extended,
        summands: d
            .summands
            .iter()
            .map(|s| SummandJson {
                dim: s.module.dim,
                multiplicity: s.multiplicity,
                certified: s.certified,
            })
            .collect(),
    }
}
