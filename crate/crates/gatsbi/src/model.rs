//! The assembled forecasting model.
