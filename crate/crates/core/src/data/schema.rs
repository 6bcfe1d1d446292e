use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DataError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Continuous,
    Categorical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Feature,
    Protected,
    Label,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
    pub role: Role,
}

/// Column metadata for one dataset and one protected attribute.
///
/// The first column with role `protected` is the one the fairness terms and
/// metrics refer to; `privileged_value` names its privileged category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schema {
    pub columns: Vec<ColumnSpec>,
    pub privileged_value: String,
    pub positive_label: String,
    /// Numeric age columns mapped to `{"25-65", "other"}` before encoding.
    #[serde(default)]
    pub age_binarize: Vec<String>,
    /// Protected columns collapsed to `{privileged_value, "other"}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub protected_binarize: Vec<String>,
}

impl Schema {
    pub fn from_json_str(text: &str) -> Result<Self, DataError> {
        let schema: Schema =
            serde_json::from_str(text).map_err(|e| DataError::SchemaParse(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn from_path(path: &Path) -> Result<Self, DataError> {
        let text = std::fs::read_to_string(path).map_err(|e| DataError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&text)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        let mut seen = HashSet::new();
        for c in &self.columns {
            if !seen.insert(c.name.as_str()) {
                return Err(DataError::InvalidSchema(format!(
                    "duplicate column name {:?}",
                    c.name
                )));
            }
        }
        let labels = self.columns.iter().filter(|c| c.role == Role::Label).count();
        if labels != 1 {
            return Err(DataError::InvalidSchema(format!(
                "expected exactly one label column, found {labels}"
            )));
        }
        if !self.columns.iter().any(|c| c.role == Role::Protected) {
            return Err(DataError::InvalidSchema(
                "no column has role protected".into(),
            ));
        }
        for c in &self.columns {
            if c.role != Role::Feature && c.kind != ColumnKind::Categorical {
                return Err(DataError::InvalidSchema(format!(
                    "{:?} column {:?} must be categorical",
                    c.role, c.name
                )));
            }
        }
        for name in &self.age_binarize {
            match self.column(name) {
                Some((_, c)) if c.kind == ColumnKind::Categorical => {}
                Some(_) => {
                    return Err(DataError::InvalidSchema(format!(
                        "age_binarize column {name:?} must be declared categorical"
                    )))
                }
                None => return Err(DataError::UnknownColumn(name.clone())),
            }
        }
        for name in &self.protected_binarize {
            match self.column(name) {
                Some((_, c)) if c.role == Role::Protected => {}
                Some(_) => {
                    return Err(DataError::InvalidSchema(format!(
                        "protected_binarize column {name:?} is not protected"
                    )))
                }
                None => return Err(DataError::UnknownColumn(name.clone())),
            }
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn column(&self, name: &str) -> Option<(usize, &ColumnSpec)> {
        self.columns.iter().enumerate().find(|(_, c)| c.name == name)
    }

    pub fn label_index(&self) -> usize {
        self.columns
            .iter()
            .position(|c| c.role == Role::Label)
            .expect("validated schema has a label")
    }

    /// Index of the protected column used for fairness.
    pub fn protected_index(&self) -> usize {
        self.columns
            .iter()
            .position(|c| c.role == Role::Protected)
            .expect("validated schema has a protected column")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = r#"{
        "columns": [
            {"name": "x", "kind": "continuous", "role": "feature"},
            {"name": "s", "kind": "categorical", "role": "protected"},
            {"name": "y", "kind": "categorical", "role": "label"}
        ],
        "privileged_value": "a",
        "positive_label": "1",
        "age_binarize": []
    }"#;

    #[test]
    fn parses_and_locates_roles() {
        let s = Schema::from_json_str(TOY).unwrap();
        assert_eq!(s.label_index(), 2);
        assert_eq!(s.protected_index(), 1);
        assert_eq!(s.names(), ["x", "s", "y"]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = TOY.replace("\"age_binarize\"", "\"age_binarise\"");
        assert!(matches!(
            Schema::from_json_str(&text),
            Err(DataError::SchemaParse(_))
        ));
    }

    #[test]
    fn label_must_be_unique_and_categorical() {
        let two = TOY.replace(r#""role": "protected""#, r#""role": "label""#);
        assert!(Schema::from_json_str(&two).is_err());
        let cont = TOY.replace(
            r#"{"name": "y", "kind": "categorical""#,
            r#"{"name": "y", "kind": "continuous""#,
        );
        assert!(Schema::from_json_str(&cont).is_err());
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let dup = TOY.replace(r#""name": "x""#, r#""name": "y""#);
        assert!(matches!(
            Schema::from_json_str(&dup),
            Err(DataError::InvalidSchema(_))
        ));
    }
}
