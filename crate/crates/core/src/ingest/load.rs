//! CSV loaders and writers for the five input tables.

use std::io::Read;
use std::path::Path;

use csv::StringRecord;

use super::tables::*;
use super::{DatasetKind, EconomyId, IngestError, Region, YearRange};

struct RecordCtx {
    kind: DatasetKind,
    line: u64,
}

impl RecordCtx {
    fn malformed(&self, message: impl Into<String>) -> IngestError {
        IngestError::MalformedCsv {
            kind: self.kind,
            line: self.line,
            message: message.into(),
        }
    }

    fn economy(&self, field: &str) -> Result<EconomyId, IngestError> {
        EconomyId::new(field).map_err(|e| self.malformed(e))
    }

    fn year(&self, field: &str) -> Result<i32, IngestError> {
        field
            .parse::<i32>()
            .map_err(|_| self.malformed(format!("'{field}' is not a year")))
    }

    fn number(&self, field: &str, label: &str) -> Result<f64, IngestError> {
        let v: f64 = field
            .parse()
            .map_err(|_| self.malformed(format!("'{field}' is not a number ({label})")))?;
        if v.is_nan() {
            return Err(self.malformed(format!("{label} is NaN")));
        }
        Ok(v)
    }

    fn optional_number(&self, field: &str, label: &str) -> Result<Option<f64>, IngestError> {
        if field.is_empty() {
            Ok(None)
        } else {
            self.number(field, label).map(Some)
        }
    }

    fn boolean(&self, field: &str, label: &str) -> Result<bool, IngestError> {
        match field {
            "0" => Ok(false),
            "1" => Ok(true),
            other => Err(self.malformed(format!("{label} must be 0 or 1, got '{other}'"))),
        }
    }
}

/// Read records of a dataset, enforcing the exact documented header.
fn read_records<R: Read>(
    kind: DatasetKind,
    reader: R,
) -> Result<Vec<(RecordCtx, StringRecord)>, IngestError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);

    let headers = csv_reader
        .headers()
        .map_err(|e| IngestError::MalformedCsv {
            kind,
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let expected = kind.headers();
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        return Err(IngestError::SchemaMismatch {
            kind,
            expected: expected.join(","),
            found: found.join(","),
        });
    }

    let mut out = Vec::new();
    for result in csv_reader.records() {
        let record = result.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            IngestError::MalformedCsv {
                kind,
                line,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        out.push((RecordCtx { kind, line }, record));
    }
    Ok(out)
}

pub fn load_lsci<R: Read>(reader: R, range: YearRange) -> Result<LsciTable, IngestError> {
    let mut rows = Vec::new();
    for (ctx, record) in read_records(DatasetKind::Lsci, reader)? {
        rows.push(LsciRow {
            economy: ctx.economy(&record[0])?,
            year: ctx.year(&record[1])?,
            lsci: ctx.number(&record[2], "lsci")?,
        });
    }
    LsciTable::from_rows(rows, range)
}

pub fn load_lsbci<R: Read>(reader: R, range: YearRange) -> Result<LsbciTable, IngestError> {
    let mut rows = Vec::new();
    for (ctx, record) in read_records(DatasetKind::Lsbci, reader)? {
        rows.push(LsbciRow {
            economy_a: ctx.economy(&record[0])?,
            economy_b: ctx.economy(&record[1])?,
            year: ctx.year(&record[2])?,
            lsbci: ctx.number(&record[3], "lsbci")?,
        });
    }
    LsbciTable::from_rows(rows, range)
}

pub fn load_plsci<R: Read>(reader: R, range: YearRange) -> Result<PlsciTable, IngestError> {
    let mut rows = Vec::new();
    for (ctx, record) in read_records(DatasetKind::Plsci, reader)? {
        let port_id = record[0].to_string();
        if port_id.is_empty() {
            return Err(ctx.malformed("empty port_id"));
        }
        rows.push(PlsciRow {
            port_id,
            economy: ctx.economy(&record[1])?,
            year: ctx.year(&record[2])?,
            plsci: ctx.number(&record[3], "plsci")?,
        });
    }
    PlsciTable::from_rows(rows, range)
}

pub fn load_classifications<R: Read>(reader: R) -> Result<ClassificationTable, IngestError> {
    let mut rows = Vec::new();
    for (ctx, record) in read_records(DatasetKind::Classification, reader)? {
        let region = Region::parse(&record[5]).ok_or_else(|| {
            ctx.malformed(format!(
                "region '{}' is not one of Africa/Americas/Asia/Europe/Oceania",
                &record[5]
            ))
        })?;
        rows.push(ClassificationRow {
            economy: ctx.economy(&record[0])?,
            name: record[1].to_string(),
            sids: ctx.boolean(&record[2], "sids")?,
            ldc: ctx.boolean(&record[3], "ldc")?,
            lldc: ctx.boolean(&record[4], "lldc")?,
            region,
        });
    }
    ClassificationTable::from_rows(rows)
}

pub fn load_external<R: Read>(reader: R, range: YearRange) -> Result<ExternalTable, IngestError> {
    let mut rows = Vec::new();
    for (ctx, record) in read_records(DatasetKind::External, reader)? {
        rows.push(ExternalRow {
            economy: ctx.economy(&record[0])?,
            year: ctx.year(&record[1])?,
            gdp_pc: ctx.optional_number(&record[2], "gdp_pc")?,
            trade_open: ctx.optional_number(&record[3], "trade_open")?,
            lpi: ctx.optional_number(&record[4], "lpi")?,
            freight_advalorem: ctx.optional_number(&record[5], "freight_advalorem")?,
        });
    }
    ExternalTable::from_rows(rows, range)
}

/// Load the five CSV files from a directory and validate the bundle.
/// `external.csv` may be absent; the external table is then empty.
pub fn load_bundle(dir: &Path, range: YearRange) -> Result<DataBundle, IngestError> {
    let open = |kind: DatasetKind| -> Result<std::fs::File, IngestError> {
        let path = dir.join(kind.file_name());
        std::fs::File::open(&path).map_err(|source| IngestError::Io {
            file: path.display().to_string(),
            source,
        })
    };

    let lsci = load_lsci(open(DatasetKind::Lsci)?, range)?;
    let lsbci = load_lsbci(open(DatasetKind::Lsbci)?, range)?;
    let plsci = load_plsci(open(DatasetKind::Plsci)?, range)?;
    let classifications = load_classifications(open(DatasetKind::Classification)?)?;
    let external_path = dir.join(DatasetKind::External.file_name());
    let external = if external_path.exists() {
        load_external(open(DatasetKind::External)?, range)?
    } else {
        ExternalTable::empty()
    };

    let provenance = vec![
        format!(
            "{} ({} rows)",
            dir.join("lsci.csv").display(),
            lsci.rows().len()
        ),
        format!(
            "{} ({} rows)",
            dir.join("lsbci.csv").display(),
            lsbci.rows().len()
        ),
        format!(
            "{} ({} rows)",
            dir.join("plsci.csv").display(),
            plsci.rows().len()
        ),
        format!(
            "{} ({} rows)",
            dir.join("classifications.csv").display(),
            classifications.rows().len()
        ),
        format!(
            "{} ({} rows)",
            external_path.display(),
            external.rows().len()
        ),
    ];
    validate_bundle(
        lsci,
        lsbci,
        plsci,
        classifications,
        external,
        range,
        provenance,
    )
}

// Full-precision writers: floats use the shortest round-trip representation,
// so write -> load reproduces a table exactly.

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

pub fn lsci_to_csv(table: &LsciTable) -> String {
    let mut out = String::from("economy,year,lsci\n");
    for row in table.rows() {
        out.push_str(&format!("{},{},{}\n", row.economy, row.year, num(row.lsci)));
    }
    out
}

pub fn lsbci_to_csv(table: &LsbciTable) -> String {
    let mut out = String::from("economy_a,economy_b,year,lsbci\n");
    for row in table.rows() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.economy_a,
            row.economy_b,
            row.year,
            num(row.lsbci)
        ));
    }
    out
}

pub fn plsci_to_csv(table: &PlsciTable) -> String {
    let mut out = String::from("port_id,economy,year,plsci\n");
    for row in table.rows() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.port_id,
            row.economy,
            row.year,
            num(row.plsci)
        ));
    }
    out
}

pub fn classifications_to_csv(table: &ClassificationTable) -> String {
    let mut out = String::from("economy,name,sids,ldc,lldc,region\n");
    for row in table.rows() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.economy, row.name, row.sids as u8, row.ldc as u8, row.lldc as u8, row.region
        ));
    }
    out
}

pub fn external_to_csv(table: &ExternalTable) -> String {
    let mut out = String::from("economy,year,gdp_pc,trade_open,lpi,freight_advalorem\n");
    for row in table.rows() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.economy,
            row.year,
            opt(row.gdp_pc),
            opt(row.trade_open),
            opt(row.lpi),
            opt(row.freight_advalorem)
        ));
    }
    out
}
