use std::collections::BTreeMap;
use std::path::Path;

use alwabp_core::Time;
use anyhow::{bail, Context, Result};

/// Best known cycle time per instance name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BkvTable {
    values: BTreeMap<String, Time>,
}

impl BkvTable {
    /// Reads `instance,cycle` records. A first record whose cycle is not a
    /// number is taken as a header.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut values = BTreeMap::new();
        for (k, record) in reader.records().enumerate() {
            let record = record?;
            let line = record.position().map_or(k as u64 + 1, |p| p.line());
            if record.len() != 2 {
                bail!("line {line}: expected `instance,cycle`");
            }
            let (name, cycle) = (&record[0], &record[1]);
            match cycle.parse::<Time>() {
                Ok(c) if c > 0 => {
                    if values.insert(name.to_string(), c).is_some() {
                        bail!("line {line}: duplicate entry for `{name}`");
                    }
                }
                Ok(_) => bail!("line {line}: best known value must be positive"),
                Err(_) if k == 0 => continue,
                Err(_) => bail!("line {line}: invalid cycle time `{cycle}`"),
            }
        }
        Ok(BkvTable { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn get(&self, instance: &str) -> Option<Time> {
        self.values.get(instance).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_optional() {
        let a = BkvTable::parse("instance,cycle\ntiny-A,2\nb, 17\n").unwrap();
        let b = BkvTable::parse("tiny-A,2\nb,17\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get("b"), Some(17));
        assert_eq!(a.get("c"), None);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(BkvTable::parse("a,0\n").is_err());
        assert!(BkvTable::parse("a,1\nb,x\n").is_err());
        assert!(BkvTable::parse("a,1\na,2\n").is_err());
        assert!(BkvTable::parse("a,1,3\n").is_err());
    }
}
