use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("placeholder")]
    Placeholder,
}
