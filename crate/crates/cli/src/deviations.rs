//! Closed forms checked against direct enumeration for every Brieskorn model
//! a run touches. Enumeration is authoritative; disagreements are listed.

use std::collections::BTreeSet;
use std::path::Path;

use collidere_core::invariants::{
    closed_form_spectral_count, signature_closed_form, signature_steenbrink, spectrum,
    BrieskornModel, Family, Rational,
};
use serde_json::{json, Value};

#[derive(Default)]
pub struct Recorder {
    models: BTreeSet<(u32, u32)>,
}

impl Recorder {
    pub fn observe(&mut self, m: BrieskornModel) {
        self.models.insert((m.p, m.q));
    }

    pub fn merge(&mut self, other: Recorder) {
        self.models.extend(other.models);
    }

    pub fn report(&self) -> Value {
        let mut deviations = Vec::new();
        let mut checked = Vec::new();
        for &(p, q) in &self.models {
            if q % p != 0 {
                continue;
            }
            let k = q / p;
            checked.push(json!({"p": p, "q": q}));
            let model = BrieskornModel::new(p, q);
            let closed = signature_closed_form(p, k);
            let enumerated = signature_steenbrink(model);
            if closed != enumerated {
                deviations.push(json!({
                    "kind": "signature",
                    "p": p,
                    "q": q,
                    "closed_form": closed,
                    "enumerated": enumerated,
                }));
            }
            let family = if k == 1 { Family::Omp { p } } else { Family::Kpk { p, k } };
            let sp = spectrum(model);
            let half = Rational::new(1, 2);
            for a in shift_grid(&sp) {
                let direct = sp.open(a - half, a + half);
                let closed = closed_form_spectral_count(family, a).ok();
                if closed != Some(direct) {
                    deviations.push(json!({
                        "kind": "spectral_count",
                        "p": p,
                        "q": q,
                        "shift": format!("{}/{}", a.numer(), a.denom()),
                        "closed_form": closed,
                        "enumerated": direct,
                    }));
                }
            }
        }
        json!({"checked": checked, "deviations": deviations})
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(&self.report()).expect("JSON values serialize");
        std::fs::write(path, text + "\n")
    }
}

/// Shifts in `[0, 1/2]` at which the centred unit interval gains or loses a
/// spectral number, the ends of that range, and the midpoints between.
fn shift_grid(sp: &collidere_core::invariants::Spectrum) -> Vec<Rational> {
    let half = Rational::new(1, 2);
    let zero = Rational::from_integer(0);
    let mut pts = vec![zero, half];
    for (s, _) in sp.iter() {
        pts.extend([s + half, s - half].into_iter().filter(|a| *a >= zero && *a <= half));
    }
    pts.sort();
    pts.dedup();
    let mids: Vec<Rational> = pts.windows(2).map(|w| (w[0] + w[1]) / 2).collect();
    pts.extend(mids);
    pts.sort();
    pts
}
