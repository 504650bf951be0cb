//! CSV cell tables: long per-severity form and wide severity-mean form.
//!
//! Long: `model,kind,severity,dee`, with a `clean,0` row per model for the
//! clean-set DEE. Wide: `model,modality,<lead>,<kind>...`, one row per model,
//! holding severity-mean values.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::corruptions::Profile;
use crate::error::{Error, Result};
use crate::robustness::{replicate, BaselineTable, DeeCell, KindId};

const LONG_HEADER: [&str; 4] = ["model", "kind", "severity", "dee"];
const CLEAN: &str = "clean";

const KITTI_C_BASELINE: &str = include_str!("../../data/baselines/kitti_c_monodepth2.csv");
const NYU_C_BASELINE: &str = include_str!("../../data/baselines/nyudepth2_c_adabins.csv");

fn parse_f64(field: &str, what: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::InvalidRequest(format!("{what}: '{field}' is not a number")))
}

/// Per-severity cells of one or more models.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LongTable {
    pub clean: BTreeMap<String, f64>,
    pub cells: Vec<DeeCell>,
}

impl LongTable {
    pub fn models(&self) -> Vec<String> {
        let mut m: Vec<String> = self.cells.iter().map(|c| c.model_id.clone()).collect();
        m.extend(self.clean.keys().cloned());
        m.sort();
        m.dedup();
        m
    }

    pub fn cells_of(&self, model: &str) -> Vec<DeeCell> {
        self.cells.iter().filter(|c| c.model_id == model).cloned().collect()
    }

    /// The single model, or `model` when given.
    pub fn pick_model(&self, model: Option<&str>) -> Result<String> {
        let models = self.models();
        match model {
            Some(m) if models.iter().any(|x| x == m) => Ok(m.to_string()),
            Some(m) => Err(Error::InvalidRequest(format!("model '{m}' not in table (have {})", models.join(", ")))),
            None if models.len() == 1 => Ok(models[0].clone()),
            None => Err(Error::InvalidRequest(format!(
                "table holds {} models; choose one of {}",
                models.len(),
                models.join(", ")
            ))),
        }
    }

    pub fn baseline(&self, model: Option<&str>) -> Result<BaselineTable> {
        let model = self.pick_model(model)?;
        let clean = *self
            .clean
            .get(&model)
            .ok_or_else(|| Error::DegenerateBaseline(format!("baseline {model} has no clean row")))?;
        BaselineTable::new(model.clone(), clean, self.cells_of(&model))
    }
}

pub fn read_long_table<R: Read>(reader: R) -> Result<LongTable> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != LONG_HEADER {
        return Err(Error::InvalidRequest(format!(
            "expected header {}, found {}",
            LONG_HEADER.join(","),
            header.join(",")
        )));
    }
    let mut table = LongTable::default();
    for rec in rdr.records() {
        let rec = rec?;
        let model = rec[0].to_string();
        let dee = parse_f64(&rec[3], "dee")?;
        if !(dee >= 0.0 && dee.is_finite()) {
            return Err(Error::InvalidRequest(format!("{model}: DEE {dee} must be finite and non-negative")));
        }
        if &rec[1] == CLEAN {
            if table.clean.insert(model.clone(), dee).is_some() {
                return Err(Error::InvalidRequest(format!("{model}: duplicate clean row")));
            }
            continue;
        }
        let kind: KindId = rec[1].parse()?;
        let severity: u8 = rec[2]
            .parse()
            .map_err(|_| Error::InvalidRequest(format!("severity '{}' is not a level", &rec[2])))?;
        table.cells.push(DeeCell::new(model, kind, severity, dee));
    }
    Ok(table)
}

pub fn write_long_table<W: Write>(writer: W, clean: &BTreeMap<String, f64>, cells: &[DeeCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(LONG_HEADER)?;
    for (model, dee) in clean {
        w.write_record([model.as_str(), CLEAN, "0", &dee.to_string()])?;
    }
    for c in cells {
        w.write_record([c.model_id.clone(), c.kind.to_string(), c.severity.to_string(), c.dee.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// One model's severity-mean row.
#[derive(Debug, Clone, PartialEq)]
pub struct WideRow {
    pub model: String,
    pub modality: String,
    /// The column right after `modality` (clean DEE, mCE or mRR).
    pub lead: f64,
    pub values: Vec<(KindId, f64)>,
}

impl WideRow {
    pub fn value(&self, kind: &KindId) -> Option<f64> {
        self.values.iter().find(|(k, _)| k == kind).map(|&(_, v)| v)
    }

    /// Each severity-mean value replicated across `levels` cells.
    pub fn cells(&self, levels: u8) -> Vec<DeeCell> {
        self.values
            .iter()
            .flat_map(|(k, v)| replicate(&self.model, k.clone(), levels, *v))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WideTable {
    pub lead_column: String,
    pub kinds: Vec<KindId>,
    pub rows: Vec<WideRow>,
}

impl WideTable {
    pub fn row(&self, model: &str) -> Option<&WideRow> {
        self.rows.iter().find(|r| r.model == model)
    }
}

pub fn read_wide_table<R: Read>(reader: R) -> Result<WideTable> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.len() < 4 || header[0] != "model" || header[1] != "modality" {
        return Err(Error::InvalidRequest(format!(
            "expected model,modality,<lead>,<kinds>..., found {}",
            header.join(",")
        )));
    }
    let kinds = header[3..].iter().map(|h| h.parse()).collect::<Result<Vec<KindId>>>()?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let model = rec[0].to_string();
        let values = kinds
            .iter()
            .enumerate()
            .map(|(i, k)| Ok((k.clone(), parse_f64(&rec[3 + i], &format!("{model}/{k}"))?)))
            .collect::<Result<Vec<_>>>()?;
        rows.push(WideRow {
            lead: parse_f64(&rec[2], &format!("{model}/{}", header[2]))?,
            modality: rec[1].to_string(),
            model,
            values,
        });
    }
    Ok(WideTable {
        lead_column: header[2].clone(),
        kinds,
        rows,
    })
}

/// Cells and clean DEE of one model from either table form.
///
/// Wide rows are replicated across `levels` severities.
pub fn read_model_cells(path: &Path, model: Option<&str>, levels: u8) -> Result<(Vec<DeeCell>, f64)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let first = text.lines().next().unwrap_or_default().replace(' ', "");
    if first == LONG_HEADER.join(",") {
        let table = read_long_table(text.as_bytes())?;
        let model = table.pick_model(model)?;
        let clean = *table
            .clean
            .get(&model)
            .ok_or_else(|| Error::InvalidRequest(format!("{model} has no clean row")))?;
        return Ok((table.cells_of(&model), clean));
    }
    let table = read_wide_table(text.as_bytes())?;
    if table.lead_column != "clean_dee" {
        return Err(Error::InvalidRequest(format!(
            "wide table must carry DEE values with a clean_dee column, found {}",
            table.lead_column
        )));
    }
    let row = match model {
        Some(m) => table
            .row(m)
            .ok_or_else(|| Error::InvalidRequest(format!("model '{m}' not in {}", path.display())))?,
        None if table.rows.len() == 1 => &table.rows[0],
        None => {
            return Err(Error::InvalidRequest(format!(
                "{} holds {} models; pass one with --model",
                path.display(),
                table.rows.len()
            )))
        }
    };
    Ok((row.cells(levels), row.lead))
}

/// The bundled baseline of a profile: MonoDepth2 for outdoor, AdaBins for indoor.
pub fn shipped_baseline(profile: Profile) -> BaselineTable {
    let text = match profile {
        Profile::Outdoor5 => KITTI_C_BASELINE,
        Profile::Indoor4 => NYU_C_BASELINE,
    };
    read_long_table(text.as_bytes())
        .and_then(|t| t.baseline(None))
        .expect("bundled baseline is well formed")
}

pub fn load_baseline(path: &Path) -> Result<BaselineTable> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_long_table(f)?.baseline(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corruptions::CorruptionKind;

    #[test]
    fn shipped_baselines_cover_their_profiles() {
        for p in [Profile::Outdoor5, Profile::Indoor4] {
            let b = shipped_baseline(p);
            assert_eq!(b.levels(), p.levels());
            let kinds: Vec<KindId> = p.default_kinds().into_iter().map(KindId::Builtin).collect();
            assert_eq!(b.kinds(), kinds);
        }
        let k = shipped_baseline(Profile::Outdoor5);
        assert_eq!(k.clean_dee(), 0.119);
        assert_eq!(k.model_id(), "MonoDepth2-R18");
    }

    #[test]
    fn long_round_trip() {
        let cells = vec![
            DeeCell::new("m", CorruptionKind::Fog, 1, 0.25),
            DeeCell::new("m", KindId::Style("ink".into()), 1, 0.5),
        ];
        let clean = BTreeMap::from([("m".to_string(), 0.125)]);
        let mut buf = Vec::new();
        write_long_table(&mut buf, &clean, &cells).unwrap();
        let back = read_long_table(buf.as_slice()).unwrap();
        assert_eq!(back.cells, cells);
        assert_eq!(back.clean, clean);
    }

    #[test]
    fn wide_rows_replicate() {
        let csv = "model,modality,clean_dee,fog,snow\nA,mono,0.1,0.2,0.3\n";
        let t = read_wide_table(csv.as_bytes()).unwrap();
        let cells = t.rows[0].cells(5);
        assert_eq!(cells.len(), 10);
        assert_eq!(t.rows[0].value(&KindId::Builtin(CorruptionKind::Snow)), Some(0.3));
        assert!(read_wide_table("model,modality,x,bogus\nA,m,1,2\n".as_bytes()).is_err());
    }
}
