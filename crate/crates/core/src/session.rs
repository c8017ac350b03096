//! Tower state on disk: the base configuration, the level registry and the
//! query log, as plain JSON with word literals.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::base::{BaseConfig, BaseGroup};
use crate::error::{ConfigError, SessionError};
use crate::extension::LevelKind;
use crate::tower::{QueryRecord, Tower};

pub const SESSION_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionFile {
    pub schema_version: u32,
    pub base: BaseConfig,
    #[serde(default)]
    pub levels: Vec<LevelRecord>,
    #[serde(default)]
    pub queries: Vec<QueryLine>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: u32,
    pub kind: LevelKind,
    pub v: String,
    pub letters: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLine {
    pub u: String,
    pub v: String,
    pub answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extended: Option<u32>,
}

impl SessionFile {
    pub fn capture(tower: &Tower) -> SessionFile {
        let levels = tower
            .registry()
            .into_iter()
            .map(|e| LevelRecord {
                level: e.level,
                kind: e.kind,
                v: tower.format(&e.v),
                letters: e.letters,
            })
            .collect();
        let queries = tower
            .queries()
            .iter()
            .map(|q| QueryLine {
                u: tower.format(&q.u),
                v: tower.format(&q.v),
                answer: tower.format(&q.answer),
                extended: q.extended,
            })
            .collect();
        SessionFile {
            schema_version: SESSION_SCHEMA_VERSION,
            base: tower.algebra().base().config().clone(),
            levels,
            queries,
        }
    }

    /// Rebuilds the tower, re-running every level check and confirming every
    /// logged answer.
    pub fn replay(&self) -> Result<Tower, SessionError> {
        if self.schema_version != SESSION_SCHEMA_VERSION {
            return Err(SessionError::Version(self.schema_version));
        }
        let mut tower = Tower::new(BaseGroup::from_config(&self.base)?);
        for (i, rec) in self.levels.iter().enumerate() {
            if rec.level as usize != i + 1 {
                return Err(SessionError::Mismatch(format!(
                    "level {} listed in position {}",
                    rec.level,
                    i + 1
                )));
            }
            let v = tower.parse(&rec.v)?;
            tower.push_level(rec.kind, &v)?;
            let letters = tower.algebra().letter_names(rec.level);
            if letters != rec.letters {
                return Err(SessionError::Mismatch(format!(
                    "level {} has letters {:?}, recorded {:?}",
                    rec.level, letters, rec.letters
                )));
            }
        }
        for q in &self.queries {
            let (u, v, answer) = (tower.parse(&q.u)?, tower.parse(&q.v)?, tower.parse(&q.answer)?);
            match tower.resolve_f_frozen(&u, &v)? {
                Some(f) if f == answer => {}
                other => {
                    return Err(SessionError::Mismatch(format!(
                        "f({}, {}) recorded as {}, now {}",
                        q.u,
                        q.v,
                        q.answer,
                        other.map(|f| tower.format(&f)).unwrap_or_else(|| "unresolved".into())
                    )))
                }
            }
            tower.push_query(QueryRecord { u, v, answer, extended: q.extended });
        }
        Ok(tower)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("sessions serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<SessionFile, SessionError> {
        serde_json::from_str(text).map_err(|e| SessionError::Config(ConfigError::Json(e)))
    }
}

pub fn save(tower: &Tower, path: &Path) -> Result<(), SessionError> {
    std::fs::write(path, SessionFile::capture(tower).to_json())?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Tower, SessionError> {
    SessionFile::from_json(&std::fs::read_to_string(path)?)?.replay()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn round_trip_preserves_levels_and_answers() {
        let mut tower = Tower::new(BaseGroup::from_config(&presets::seed()).unwrap());
        for (u, v) in [("1", "t a t"), ("1", "t a t a^2 t"), ("t", "t f1@1 a")] {
            let (u, v) = (tower.parse(u).unwrap(), tower.parse(v).unwrap());
            tower.resolve_f(&u, &v).unwrap();
        }
        let file = SessionFile::capture(&tower);
        let json = file.to_json();
        let back = SessionFile::from_json(&json).unwrap();
        assert_eq!(back, file);
        let replayed = back.replay().unwrap();
        assert_eq!(SessionFile::capture(&replayed).to_json(), json);
    }

    #[test]
    fn tampered_answer_is_rejected() {
        let mut tower = Tower::new(BaseGroup::from_config(&presets::seed()).unwrap());
        let (u, v) = (tower.parse("1").unwrap(), tower.parse("t a t").unwrap());
        tower.resolve_f(&u, &v).unwrap();
        let mut file = SessionFile::capture(&tower);
        file.queries[0].answer = "f2@1".into();
        assert!(matches!(file.replay(), Err(SessionError::Mismatch(_))));
    }
}
