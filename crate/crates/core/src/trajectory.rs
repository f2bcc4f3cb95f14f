//! Recorded solutions and their CSV form.
//!
//! CSV layout: header `t, x_0..x_{n-1}, lambda_0..lambda_{m-1}, V, mask`,
//! one row per recorded state. `V` is empty when no reference saddle was
//! supplied; `mask` is the active-projection bitstring (`'1'` = clamped).
//! Scalars are written in shortest round-trip decimal form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::PrimalDualPoint;
use crate::projection::ActiveMask;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Horizon,
    KktTolerance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<PrimalDualPoint<T>>,
    /// Lyapunov values at each recorded state, present when a reference
    /// saddle was supplied.
    pub v_values: Option<Vec<T>>,
    pub masks: Vec<ActiveMask>,
    /// `None` for trajectories read back from CSV.
    pub terminated_by: Option<Termination>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn final_state(&self) -> Option<&PrimalDualPoint<T>> {
        self.states.last()
    }

    pub fn final_time(&self) -> Option<T> {
        self.times.last().copied()
    }

    /// State at record index `k`, holding the final state once the
    /// trajectory has stopped.
    pub fn state_or_last(&self, k: usize) -> &PrimalDualPoint<T> {
        &self.states[k.min(self.states.len() - 1)]
    }

    /// Largest increase `v[k+1] - v[k]` between consecutive records;
    /// negative when `V` strictly decreases throughout.
    pub fn max_v_increase(&self) -> Option<T> {
        let v = self.v_values.as_ref()?;
        v.windows(2)
            .map(|w| w[1] - w[0])
            .fold(None, |acc: Option<T>, d| Some(acc.map_or(d, |a| a.max(d))))
    }

    /// Sup over record indices of the distance to `other`; the shorter
    /// trajectory is held at its final state.
    pub fn sup_distance(&self, other: &Self) -> T {
        let len = self.len().max(other.len());
        (0..len)
            .map(|k| self.state_or_last(k).distance(other.state_or_last(k)))
            .fold(T::zero(), |a, d| a.max(d))
    }

    pub fn csv_header(n: usize, m: usize) -> Vec<String> {
        let mut header = vec!["t".to_string()];
        header.extend((0..n).map(|i| format!("x_{i}")));
        header.extend((0..m).map(|i| format!("lambda_{i}")));
        header.push("V".into());
        header.push("mask".into());
        header
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let (n, m) = self.states.first().map_or((0, 0), |p| (p.n(), p.m()));
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(Self::csv_header(n, m))?;
        for (k, state) in self.states.iter().enumerate() {
            let mut row = Vec::with_capacity(n + m + 3);
            row.push(self.times[k].to_string());
            row.extend(state.x.iter().chain(&state.lambda).map(T::to_string));
            row.push(
                self.v_values
                    .as_ref()
                    .map_or_else(String::new, |v| v[k].to_string()),
            );
            row.push(self.masks[k].to_bitstring());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(reader);
        let header = input.headers()?.clone();
        let count = |prefix: &str| header.iter().filter(|h| h.starts_with(prefix)).count();
        let (n, m) = (count("x_"), count("lambda_"));
        if header.len() != n + m + 3 || header.get(0) != Some("t") {
            return Err(Error::Malformed(format!(
                "unexpected trajectory header: {:?}",
                header.iter().collect::<Vec<_>>()
            )));
        }
        let parse = |s: &str| {
            s.parse::<T>()
                .map_err(|_| Error::Malformed(format!("bad number `{s}` in trajectory csv")))
        };
        let mut traj = Trajectory {
            times: vec![],
            states: vec![],
            v_values: None,
            masks: vec![],
            terminated_by: None,
        };
        let mut v_values = Vec::new();
        let mut any_v = false;
        for record in input.records() {
            let record = record?;
            traj.times.push(parse(&record[0])?);
            let nums = (1..=n + m)
                .map(|j| parse(&record[j]))
                .collect::<Result<Vec<T>>>()?;
            traj.states.push(PrimalDualPoint::from_stacked(n, &nums));
            let v = &record[n + m + 1];
            if !v.is_empty() {
                any_v = true;
                v_values.push(parse(v)?);
            }
            let mask = &record[n + m + 2];
            traj.masks.push(
                ActiveMask::from_bitstring(mask).ok_or_else(|| {
                    Error::Malformed(format!("bad mask `{mask}` in trajectory csv"))
                })?,
            );
        }
        if any_v {
            if v_values.len() != traj.len() {
                return Err(Error::Malformed("V column partially filled".into()));
            }
            traj.v_values = Some(v_values);
        }
        Ok(traj)
    }

    /// Equality of everything the CSV form carries.
    pub fn same_records(&self, other: &Self) -> bool {
        self.times == other.times
            && self.states == other.states
            && self.v_values == other.v_values
            && self.masks == other.masks
    }
}
