use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

/// One line of a verification stream.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub runtime_ms: u64,
}

/// Builder for the parameter map of a report.
#[derive(Default)]
pub struct Params(BTreeMap<String, Value>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, v: impl Serialize) -> Self {
        self.0.insert(key.to_string(), serde_json::to_value(v).expect("serializable parameter"));
        self
    }
}

/// Writes reports as JSON lines and remembers the first failure.
pub struct Stream<W: Write> {
    out: W,
    timing: bool,
    first_failure: Option<Report>,
    any_bad: bool,
}

impl<W: Write> Stream<W> {
    pub fn new(out: W, timing: bool) -> Self {
        Stream { out, timing, first_failure: None, any_bad: false }
    }

    /// Run `f`, time it and emit the resulting report.
    pub fn run(&mut self, check: &str, params: Params, f: impl FnOnce() -> (Status, Option<Value>)) -> std::io::Result<()> {
        let t = Instant::now();
        let (status, witness) = f();
        let runtime_ms = if self.timing { t.elapsed().as_millis() as u64 } else { 0 };
        let rep = Report { check: check.to_string(), params: params.0, status, witness, runtime_ms };
        if status != Status::Pass {
            self.any_bad = true;
            if self.first_failure.is_none() {
                self.first_failure = Some(rep.clone());
            }
        }
        serde_json::to_writer(&mut self.out, &rep)?;
        writeln!(self.out)
    }

    pub fn first_failure(&self) -> Option<&Report> {
        self.first_failure.as_ref()
    }

    pub fn all_pass(&self) -> bool {
        !self.any_bad
    }
}

/// `(status, witness)` for a boolean check with a lazily built witness.
pub fn verdict(ok: bool, witness: impl FnOnce() -> Value) -> (Status, Option<Value>) {
    if ok {
        (Status::Pass, None)
    } else {
        (Status::Fail, Some(witness()))
    }
}
