//! Class-group tables cached as line-delimited JSON, one file per (D, c).

use crate::error::Result;
use crate::io::{read_jsonl, write_jsonl};
use crate::quadclass::{ClassGroup, ImagQuadOrder, QuadForm};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize)]
struct Row {
    index: usize,
    form: QuadForm,
    products: Vec<usize>,
}

pub struct ClassGroupCache {
    dir: PathBuf,
}

impl ClassGroupCache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        ClassGroupCache { dir: dir.as_ref().to_path_buf() }
    }

    pub fn path_for(&self, order: &ImagQuadOrder) -> PathBuf {
        self.dir.join(format!(
            "classgroup_D{}_c{}.jsonl",
            order.fundamental_discriminant(),
            order.conductor()
        ))
    }

    /// Load a stored table (validated on read) or compute and store it.
    pub fn load_or_compute(&self, order: ImagQuadOrder) -> Result<ClassGroup> {
        let path = self.path_for(&order);
        if path.exists() {
            let rows: Vec<Row> = read_jsonl(&path)?;
            let forms = rows.iter().map(|r| r.form).collect();
            let table = rows.into_iter().map(|r| r.products).collect();
            return ClassGroup::from_parts(order, forms, table);
        }
        let group = ClassGroup::new(order);
        std::fs::create_dir_all(&self.dir)?;
        let rows: Vec<Row> = (0..group.len())
            .map(|i| Row { index: i, form: *group.form(i), products: group.table()[i].clone() })
            .collect();
        write_jsonl(&path, &rows)?;
        Ok(group)
    }
}
