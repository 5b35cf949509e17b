use std::io::{Read, Write};

use crate::error::{Error, Result};

/// `T x K` matrix of realized losses in `[0, 1]`, row-major by round.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTable {
    horizon: usize,
    num_actions: usize,
    data: Vec<f64>,
}

impl LossTable {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let horizon = rows.len();
        let num_actions = rows.first().map_or(0, Vec::len);
        if horizon == 0 || num_actions == 0 {
            return Err(Error::DimensionMismatch("loss table must be non-empty".into()));
        }
        let mut data = Vec::with_capacity(horizon * num_actions);
        for (t, row) in rows.into_iter().enumerate() {
            if row.len() != num_actions {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {num_actions}",
                    t + 1,
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::from_flat(horizon, num_actions, data)
    }

    pub(crate) fn from_flat(horizon: usize, num_actions: usize, data: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(data.len(), horizon * num_actions);
        if let Some(pos) = data.iter().position(|l| !(0.0..=1.0).contains(l)) {
            return Err(Error::invalid(format!(
                "loss {} at round {}, action {} outside [0, 1]",
                data[pos],
                pos / num_actions + 1,
                pos % num_actions + 1
            )));
        }
        Ok(Self {
            horizon,
            num_actions,
            data,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    /// Losses of round `t` (0-based).
    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.num_actions..(t + 1) * self.num_actions]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.num_actions)
    }

    /// Total loss of each action over the whole table.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.num_actions];
        for row in self.rows() {
            for (s, l) in sums.iter_mut().zip(row) {
                *s += l;
            }
        }
        sums
    }

    /// CSV without a header: `T` rows of `K` comma-separated values.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (idx, record) in rdr.records().enumerate() {
            let record = record?;
            let row = record
                .iter()
                .map(|field| {
                    field.parse::<f64>().map_err(|_| Error::Parse {
                        line: idx + 1,
                        message: format!("invalid loss `{field}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for row in self.rows() {
            wtr.write_record(row.iter().map(|l| l.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}
