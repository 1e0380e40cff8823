#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "distrl/return_dist.hpp"

namespace distrl {

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

/// Numeric CSV: one header line, then rows of numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);

/// Writes a header line and rows with round-trip number formatting.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Atoms with positive weight as atom_x,atom_y,weight (z0,...,weight when
/// the grid is not two-dimensional).
void write_distribution_csv(std::ostream& out, const CategoricalReturnDist& dist);

/// Reads a weighted point set. When the last header field is "weight" it
/// holds the weights (renormalized); otherwise every row has equal weight.
WeightedPoints read_measure_csv(std::istream& in);

/// Writes raw samples as x,y (z0,z1,... for other dimensions).
void write_samples_csv(std::ostream& out, const SampleSet& samples);

}  // namespace distrl
