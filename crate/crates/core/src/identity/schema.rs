use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::AgentId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Category {
    pub name: String,
    pub registers: Vec<String>,
}

/// Ordered identity categories and their registers. Fixes the dimension
/// order of every identity vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SchemaFile", into = "SchemaFile")]
pub struct CategorySchema {
    categories: Vec<Category>,
    offsets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SchemaFile {
    categories: Vec<Category>,
}

impl TryFrom<SchemaFile> for CategorySchema {
    type Error = Error;
    fn try_from(f: SchemaFile) -> Result<Self> {
        CategorySchema::new(f.categories)
    }
}

impl From<CategorySchema> for SchemaFile {
    fn from(s: CategorySchema) -> Self {
        SchemaFile {
            categories: s.categories,
        }
    }
}

impl CategorySchema {
    pub fn new(categories: Vec<Category>) -> Result<Self> {
        if categories.is_empty() {
            return Err(Error::invalid("schema needs at least one category"));
        }
        let mut offsets = vec![0];
        for c in &categories {
            if c.registers.is_empty() {
                return Err(Error::invalid(format!(
                    "category {} has no registers",
                    c.name
                )));
            }
            offsets.push(offsets.last().unwrap() + c.registers.len());
        }
        Ok(CategorySchema {
            categories,
            offsets,
        })
    }

    /// Convenience constructor with generated names: `sizes[k]` registers in
    /// category `k`.
    pub fn with_sizes(sizes: &[usize]) -> Result<Self> {
        Self::new(
            sizes
                .iter()
                .enumerate()
                .map(|(k, &n)| Category {
                    name: format!("c{k}"),
                    registers: (0..n).map(|r| format!("c{k}r{r}")).collect(),
                })
                .collect(),
        )
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    /// Total number of registers `d`.
    pub fn dimension(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Cumulative register offsets; category `k` spans `offsets[k]..offsets[k+1]`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn span(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn category_of(&self, register: usize) -> usize {
        self.offsets.partition_point(|&o| o <= register) - 1
    }
}

/// Identity vectors for every agent, row-major, with per-dimension sorted
/// columns kept for quantile lookups.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    schema: CategorySchema,
    values: Vec<f64>,
    sorted_columns: Vec<Vec<f64>>,
}

impl Population {
    pub fn new(schema: CategorySchema, rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = schema.dimension();
        let mut values = Vec::with_capacity(rows.len() * d);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: r.len(),
                });
            }
            if let Some(v) = r.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::invalid(format!(
                    "identity of agent {i} has value {v} outside [0,1]"
                )));
            }
            values.extend_from_slice(r);
        }
        Ok(Self::from_flat(schema, values))
    }

    pub(crate) fn from_flat(schema: CategorySchema, values: Vec<f64>) -> Self {
        let d = schema.dimension();
        let n = values.len().checked_div(d).unwrap_or(0);
        let sorted_columns = (0..d)
            .map(|m| {
                let mut c: Vec<f64> = (0..n).map(|i| values[i * d + m]).collect();
                c.sort_by(f64::total_cmp);
                c
            })
            .collect();
        Population {
            schema,
            values,
            sorted_columns,
        }
    }

    /// Every agent gets the same identity vector.
    pub fn uniform(schema: CategorySchema, n: usize, value: f64) -> Result<Self> {
        let d = schema.dimension();
        Self::new(schema, vec![vec![value; d]; n])
    }

    pub fn schema(&self) -> &CategorySchema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.sorted_columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> usize {
        self.schema.dimension()
    }

    #[inline]
    pub fn row(&self, agent: AgentId) -> &[f64] {
        let d = self.dimension();
        &self.values[agent as usize * d..(agent as usize + 1) * d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dimension())
    }

    pub fn sorted_column(&self, m: usize) -> &[f64] {
        &self.sorted_columns[m]
    }
}
