use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("placeholder")]
    Placeholder,
}
