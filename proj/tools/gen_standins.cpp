// Regenerates the bundled stand-in datasets under data/. The CSVs are
// committed; this exists so they can be rebuilt deterministically.

#include <cstdio>
#include <fstream>
#include <string>

#include "axeval/dataset.hpp"
#include "axeval/experiments.hpp"

namespace {

void write_csv(const axeval::Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  out.precision(17);
  for (std::size_t j = 0; j < ds.cols(); ++j)
    out << ds.column_names()[j] << ",";
  out << "target\n";
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const auto row = ds.raw_row(i);
    for (double v : row) out << v << ",";
    out << (*ds.labels())[i] << "\n";
  }
  std::printf("wrote %s (%zu x %zu)\n", path.c_str(), ds.rows(), ds.cols());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  write_csv(axeval::make_standin_dataset(160, 6, 11), dir + "/credit_standin.csv");
  write_csv(axeval::make_standin_dataset(180, 5, 22),
            dir + "/recidivism_standin.csv");
  write_csv(axeval::make_standin_dataset(200, 7, 33), dir + "/income_standin.csv");
  write_csv(axeval::make_standin_dataset(60, 4, 7), dir + "/demo_small.csv");
  return 0;
}
