use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("placeholder")]
    Placeholder,
}
