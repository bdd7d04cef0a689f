//! Pass/fail records shared by the check suite and the CLI.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How a claimed value is compared with the computed one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// computed < claimed + tolerance
    Below,
    /// computed > claimed - tolerance
    Above,
    /// |computed - claimed| <= tolerance
    Near,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub item: String,
    pub relation: Relation,
    pub claimed: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Sampling resolution or caveat, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(item: impl Into<String>, relation: Relation, claimed: f64, computed: f64, tolerance: f64) -> Check {
        let pass = match relation {
            Relation::Below => computed < claimed + tolerance,
            Relation::Above => computed > claimed - tolerance,
            Relation::Near => (computed - claimed).abs() <= tolerance,
        } && computed.is_finite();
        Check { item: item.into(), relation, claimed, computed, tolerance, pass, note: None }
    }

    pub fn below(item: impl Into<String>, claimed: f64, computed: f64, tolerance: f64) -> Check {
        Check::new(item, Relation::Below, claimed, computed, tolerance)
    }

    pub fn above(item: impl Into<String>, claimed: f64, computed: f64, tolerance: f64) -> Check {
        Check::new(item, Relation::Above, claimed, computed, tolerance)
    }

    pub fn near(item: impl Into<String>, claimed: f64, computed: f64, tolerance: f64) -> Check {
        Check::new(item, Relation::Near, claimed, computed, tolerance)
    }

    /// A boolean outcome recorded as computed 1/0 against claimed 1.
    pub fn holds(item: impl Into<String>, ok: bool) -> Check {
        Check::near(item, 1.0, if ok { 1.0 } else { 0.0 }, 0.0)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }
}

/// Checks grouped by topic; ordering is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub groups: BTreeMap<String, Vec<Check>>,
}

impl Report {
    pub fn add(&mut self, group: &str, check: Check) {
        self.groups.entry(group.to_string()).or_default().push(check);
    }

    pub fn extend(&mut self, group: &str, checks: impl IntoIterator<Item = Check>) {
        self.groups.entry(group.to_string()).or_default().extend(checks);
    }

    pub fn merge(&mut self, other: Report) {
        for (k, v) in other.groups {
            self.groups.entry(k).or_default().extend(v);
        }
    }

    pub fn pass(&self) -> bool {
        self.groups.values().flatten().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<(&str, &Check)> {
        self.groups
            .iter()
            .flat_map(|(g, cs)| cs.iter().filter(|c| !c.pass).map(move |c| (g.as_str(), c)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(|v| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
