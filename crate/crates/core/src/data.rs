//! Dataset ingestion: price series, their absolute percentage returns, count
//! tables, and the embedded number-one hits data.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::yule_simon::FrequencySample;

/// Number-one hits per artist: (hits, number of artists).
pub const HITS: [(u64, u64); 16] = [
    (1, 119),
    (2, 57),
    (3, 30),
    (4, 13),
    (5, 10),
    (6, 4),
    (7, 1),
    (8, 1),
    (9, 4),
    (10, 2),
    (11, 1),
    (12, 2),
    (13, 1),
    (14, 1),
    (15, 1),
    (16, 1),
];

/// Looks up a dataset shipped with the crate, read in the given mode.
///
/// For `hits`, [`CountMode::Hits`] gives 248 observations (k = hits per
/// artist) while [`CountMode::Surnames`] takes each row's artist count as one
/// observation, which is how the published posterior summaries were computed.
pub fn embedded(name: &str, mode: CountMode) -> Option<FrequencySample> {
    match name {
        "hits" => Some(
            match mode {
                CountMode::Hits => FrequencySample::new(HITS),
                CountMode::Surnames => {
                    FrequencySample::aggregate(HITS.iter().map(|&(_, n)| (n, 1)))
                }
            }
            .expect("embedded table is valid"),
        ),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    rows: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    /// Dates must be strictly increasing and prices positive.
    pub fn new(rows: Vec<(NaiveDate, f64)>) -> Result<Self> {
        for (i, &(_, p)) in rows.iter().enumerate() {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::InvalidData(format!(
                    "price at row {} is not positive: {p}",
                    i + 1
                )));
            }
        }
        if let Some(i) = rows.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidData(format!(
                "dates not strictly increasing at row {}: {} after {}",
                i + 2,
                rows[i + 1].0,
                rows[i].0
            )));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[(NaiveDate, f64)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn data_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Data {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads records after checking the header, yielding (line, fields).
fn read_records(path: &Path, header: [&str; 2]) -> Result<Vec<(u64, String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    let found = reader
        .headers()
        .map_err(|e| data_error(path, 1, e.to_string()))?
        .clone();
    if found.len() != 2 || found[0] != *header[0] || found[1] != *header[1] {
        return Err(data_error(
            path,
            1,
            format!("expected header `{},{}`", header[0], header[1]),
        ));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            data_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(data_error(
                path,
                line,
                format!("expected 2 fields, found {}", record.len()),
            ));
        }
        out.push((line, record[0].to_string(), record[1].to_string()));
    }
    Ok(out)
}

/// Parses a `date,adj_close` CSV with ISO-8601 dates.
pub fn ingest_prices(path: &Path) -> Result<PriceSeries> {
    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    for (line, date, price) in read_records(path, ["date", "adj_close"])? {
        let date = NaiveDate::parse_from_str(&date, "%Y-%m-%d")
            .map_err(|e| data_error(path, line, format!("bad date `{date}`: {e}")))?;
        let price: f64 = price
            .parse()
            .map_err(|_| data_error(path, line, format!("bad price `{price}`")))?;
        if !(price > 0.0 && price.is_finite()) {
            return Err(data_error(
                path,
                line,
                format!("price must be positive, got {price}"),
            ));
        }
        if let Some(&(prev, _)) = rows.last() {
            if date <= prev {
                return Err(data_error(
                    path,
                    line,
                    format!("date {date} is not after the previous date {prev}"),
                ));
            }
        }
        rows.push((date, price));
    }
    PriceSeries::new(rows)
}

/// Absolute percentage changes z_t = |p_t/p_{t−1} − 1| · 100.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    values: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|z| !(*z >= 0.0 && z.is_finite())) {
            return Err(Error::InvalidData(
                "returns must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn to_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    if prices.len() < 2 {
        return Err(Error::InvalidData(format!(
            "need at least two prices to form a return, got {}",
            prices.len()
        )));
    }
    let values = prices
        .rows()
        .windows(2)
        .map(|w| (w[1].1 / w[0].1 - 1.0).abs() * 100.0)
        .collect();
    ReturnSeries::new(values)
}

pub const DEFAULT_DECIMALS: u32 = 2;

/// Resolution used to snap returns before truncation, in decimal places.
const SNAP_DECIMALS: u32 = 8;

/// Truncates toward zero to `decimals` places, returning integer units of
/// 10^-decimals. The value is first rounded to 10^-8 so that, say, 0.29
/// stored as 0.28999… still lands in the 0.29 bucket.
pub fn truncate_units(z: f64, decimals: u32) -> u64 {
    let snapped = (z * 10f64.powi(SNAP_DECIMALS as i32)).round() as u64;
    snapped / 10u64.pow(SNAP_DECIMALS - decimals)
}

/// Groups returns by their truncated value; each group contributes one
/// observation equal to its size.
pub fn discretize_returns(returns: &ReturnSeries, decimals: u32) -> Result<FrequencySample> {
    if decimals > SNAP_DECIMALS {
        return Err(Error::Config(format!(
            "at most {SNAP_DECIMALS} decimals are supported (got {decimals})"
        )));
    }
    if returns.values().is_empty() {
        return Err(Error::InvalidData("no returns to discretize".into()));
    }
    let mut groups: BTreeMap<u64, u64> = BTreeMap::new();
    for &z in returns.values() {
        *groups.entry(truncate_units(z, decimals)).or_insert(0) += 1;
    }
    FrequencySample::from_observations(&groups.into_values().collect::<Vec<_>>())
}

/// How the second column of a count table is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// `k,count`: value k observed `count` times.
    Hits,
    /// `label,frequency`: each row is one observation equal to `frequency`.
    Surnames,
}

/// Rows of a two-column count file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub rows: Vec<(String, u64)>,
}

fn parse_positive(path: &Path, line: u64, field: &str, what: &str) -> Result<u64> {
    match field.parse::<u64>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(data_error(
            path,
            line,
            format!("{what} must be a positive integer, got `{field}`"),
        )),
    }
}

pub fn load_count_table(path: &Path, mode: CountMode) -> Result<FrequencySample> {
    match mode {
        CountMode::Hits => {
            let mut seen: BTreeMap<u64, u64> = BTreeMap::new();
            for (line, k, count) in read_records(path, ["k", "count"])? {
                let k = parse_positive(path, line, &k, "k")?;
                let count = parse_positive(path, line, &count, "count")?;
                if seen.insert(k, count).is_some() {
                    return Err(data_error(
                        path,
                        line,
                        format!("value k = {k} listed twice"),
                    ));
                }
            }
            if seen.is_empty() {
                return Err(data_error(path, 1, "table has no rows"));
            }
            FrequencySample::new(seen)
        }
        CountMode::Surnames => {
            let mut table = CountTable { rows: Vec::new() };
            for (line, label, freq) in read_records(path, ["label", "frequency"])? {
                let freq = parse_positive(path, line, &freq, "frequency")?;
                table.rows.push((label, freq));
            }
            if table.rows.is_empty() {
                return Err(data_error(path, 1, "table has no rows"));
            }
            FrequencySample::aggregate(table.rows.iter().map(|&(_, f)| (f, 1)))
        }
    }
}

/// Writes `k,count` rows that [`load_count_table`] reads back in hits mode.
pub fn write_frequency_sample(path: &Path, sample: &FrequencySample) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = std::io::BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "k,count").map_err(io)?;
    for &(k, count) in sample.entries() {
        writeln!(out, "{k},{count}").map_err(io)?;
    }
    out.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn file_with(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn embedded_hits() {
        let hits = embedded("hits", CountMode::Hits).unwrap();
        assert_eq!(hits.n(), 248);
        assert_eq!(hits.entries()[0], (1, 119));
        let rows = embedded("hits", CountMode::Surnames).unwrap();
        assert_eq!(rows.n(), 16);
        assert_eq!(rows.entries().iter().map(|&(k, m)| k * m).sum::<u64>(), 248);
        assert_eq!(rows.entries()[0], (1, 7));
        assert!(embedded("stocks", CountMode::Hits).is_none());
    }

    #[test]
    fn prices_parse() {
        let f = file_with("date,adj_close\n2014-10-01,100.0\n2014-10-02,101.0\n");
        let prices = ingest_prices(f.path()).unwrap();
        assert_eq!(prices.len(), 2);
        let r = to_returns(&prices).unwrap();
        assert!((r.values()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unsorted_prices_name_the_line() {
        let f = file_with("date,adj_close\n2014-10-02,100.0\n2014-10-01,101.0\n");
        match ingest_prices(f.path()).unwrap_err() {
            Error::Data { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_price_rows() {
        let f = file_with("date,adj_close\n2014-10-01,-3\n");
        assert!(matches!(
            ingest_prices(f.path()),
            Err(Error::Data { line: 2, .. })
        ));
        let f = file_with("date,adj_close\n2014-13-01,3\n");
        assert!(matches!(
            ingest_prices(f.path()),
            Err(Error::Data { line: 2, .. })
        ));
        let f = file_with("when,price\n2014-10-01,3\n");
        assert!(matches!(
            ingest_prices(f.path()),
            Err(Error::Data { line: 1, .. })
        ));
        assert!(matches!(
            ingest_prices(Path::new("/nonexistent/prices.csv")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn returns_formula() {
        let d = |day| NaiveDate::from_ymd_opt(2014, 1, day).unwrap();
        let series = |a: f64, b: f64| PriceSeries::new(vec![(d(1), a), (d(2), b)]).unwrap();
        assert!((to_returns(&series(100.0, 101.0)).unwrap().values()[0] - 1.0).abs() < 1e-12);
        assert!((to_returns(&series(100.0, 98.0)).unwrap().values()[0] - 2.0).abs() < 1e-12);
        assert_eq!(to_returns(&series(100.0, 100.0)).unwrap().values()[0], 0.0);
        assert!(to_returns(&PriceSeries::new(vec![(d(1), 1.0)]).unwrap()).is_err());
    }

    #[test]
    fn year_of_prices_gives_365_returns() {
        let start = NaiveDate::from_ymd_opt(2014, 10, 1).unwrap();
        let rows = (0..366)
            .map(|i| (start + chrono::Days::new(i), 100.0 + (i % 7) as f64))
            .collect();
        let returns = to_returns(&PriceSeries::new(rows).unwrap()).unwrap();
        assert_eq!(returns.values().len(), 365);
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(truncate_units(1.2494, 2), 124);
        assert_eq!(truncate_units(1.2573, 2), 125);
        assert_eq!(truncate_units(0.29, 2), 29);
        assert_eq!(truncate_units(100.0 * (1.0 - 0.9971), 2), 29);
        assert_eq!(truncate_units(1.2494, 1), 12);
        assert_eq!(truncate_units(1.2573, 1), 12);
    }

    #[test]
    fn discretization_examples() {
        let r = ReturnSeries::new(vec![1.2494, 1.2573]).unwrap();
        assert_eq!(discretize_returns(&r, 2).unwrap().entries(), &[(1, 2)]);
        assert_eq!(discretize_returns(&r, 1).unwrap().entries(), &[(2, 1)]);
        let r = ReturnSeries::new(vec![0.10, 0.10, 0.10]).unwrap();
        assert_eq!(discretize_returns(&r, 2).unwrap().entries(), &[(3, 1)]);
        assert!(discretize_returns(&ReturnSeries::new(vec![]).unwrap(), 2).is_err());
        assert!(ReturnSeries::new(vec![-1.0]).is_err());
    }

    #[test]
    fn count_tables() {
        let f = file_with("k,count\n1,119\n2,57\n");
        let s = load_count_table(f.path(), CountMode::Hits).unwrap();
        assert_eq!(s.entries(), &[(1, 119), (2, 57)]);
        let f = file_with("label,frequency\nSmith,2502021\nJohnson,1932812\nDoe,7\nRoe,7\n");
        let s = load_count_table(f.path(), CountMode::Surnames).unwrap();
        assert_eq!(s.entries(), &[(7, 2), (1_932_812, 1), (2_502_021, 1)]);
        let f = file_with("k,count\n1,3\n1,4\n");
        assert!(matches!(
            load_count_table(f.path(), CountMode::Hits),
            Err(Error::Data { line: 3, .. })
        ));
        let f = file_with("k,count\n1,0\n");
        assert!(matches!(
            load_count_table(f.path(), CountMode::Hits),
            Err(Error::Data { line: 2, .. })
        ));
        let f = file_with("k,count\n");
        assert!(load_count_table(f.path(), CountMode::Hits).is_err());
    }

    proptest! {
        #[test]
        fn discretization_partitions_returns(values in proptest::collection::vec(0.0f64..20.0, 1..300)) {
            let r = ReturnSeries::new(values.clone()).unwrap();
            let s = discretize_returns(&r, 2).unwrap();
            let total: u64 = s.entries().iter().map(|&(k, m)| k * m).sum();
            prop_assert_eq!(total as usize, values.len());
        }

        #[test]
        fn frequency_sample_round_trip(entries in proptest::collection::btree_map(1u64..10_000_000, 1u64..1000, 1..40)) {
            let sample = FrequencySample::new(entries).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("sample.csv");
            write_frequency_sample(&path, &sample).unwrap();
            prop_assert_eq!(load_count_table(&path, CountMode::Hits).unwrap(), sample);
        }
    }
}
