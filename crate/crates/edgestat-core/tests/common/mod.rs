pub mod reference_values;
