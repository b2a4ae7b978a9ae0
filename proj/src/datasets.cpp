#include <string>

#include "tcalib/errors.hpp"
#include "tcalib/io.hpp"

namespace tcalib::io {

namespace {

// Asbestos grade diagnosed by years of exposure for 1117 workers.
constexpr std::string_view kAsbestos =
    "Exposure,G0,G1,G2,G3\n"
    "0-9,310,36,0,0\n"
    "10-19,212,158,9,0\n"
    "20-29,21,35,17,4\n"
    "30-39,25,102,49,18\n"
    "40+,7,35,51,28\n";

// Memberships of Western Hemisphere countries in regional trade and treaty
// organizations, rows exactly as tabulated (total 148; the tabulated MERCOSUR
// column total reads 5 but only four member rows are marked).
constexpr std::string_view kAmericas =
    "Country,ACS,ALADI,Amazon,Andean,CARICOM,GEPLACEA,Rio,G3,IDB,MERCOSUR,NAFTA,OAS,PARLACEN,SanJose,SELA\n"
    "Argentina,0,1,0,0,0,1,1,0,1,1,0,1,0,0,1\n"
    "Belize,1,0,0,0,1,0,0,0,1,0,0,1,0,0,1\n"
    "Bolivia,0,1,1,1,0,1,1,0,1,0,0,1,0,0,1\n"
    "Brazil,0,1,1,0,0,1,1,0,1,1,0,1,0,0,1\n"
    "Canada,0,0,0,0,0,0,0,0,1,0,1,1,0,0,0\n"
    "Chile,0,1,0,0,0,0,1,0,1,0,0,1,0,0,1\n"
    "Colombia,1,1,1,1,0,1,1,1,1,0,0,1,0,0,1\n"
    "CostaRica,1,0,0,0,0,1,0,0,1,0,0,1,0,1,1\n"
    "Ecuador,0,1,1,1,0,1,1,0,1,0,0,1,0,0,1\n"
    "ElSalvador,1,0,0,0,0,1,0,0,1,0,0,1,1,1,1\n"
    "Guatemala,1,0,0,0,0,1,0,0,1,0,0,1,1,1,1\n"
    "Guyana,1,0,1,0,1,1,0,0,1,0,0,1,0,0,1\n"
    "Honduras,1,0,0,0,0,1,0,0,1,0,0,1,1,1,1\n"
    "Mexico,1,1,0,0,0,1,1,1,1,0,1,1,0,0,1\n"
    "Nicaragua,1,0,0,0,0,1,0,0,1,0,0,1,0,1,1\n"
    "Panama,1,0,0,0,0,1,0,0,1,0,0,1,0,1,1\n"
    "Paraguay,0,1,0,0,0,0,1,0,1,1,0,1,0,0,1\n"
    "Peru,0,1,1,1,0,1,1,0,1,0,0,1,0,0,1\n"
    "Suriname,1,0,1,0,0,0,0,0,1,0,0,1,0,0,1\n"
    "UnitedStates,0,0,0,0,0,0,0,0,1,0,1,1,0,0,0\n"
    "Uruguay,0,1,0,0,0,1,1,0,1,1,0,1,0,0,1\n"
    "Venezuela,1,1,1,1,0,1,1,1,1,0,0,1,0,0,1\n";

}  // namespace

std::string_view dataset_csv(std::string_view name) {
  if (name == "asbestos") return kAsbestos;
  if (name == "americas") return kAmericas;
  throw InputError("unknown dataset '" + std::string(name) + "'");
}

LabeledMatrix load_dataset(std::string_view name) { return parse_matrix_csv(dataset_csv(name)); }

std::vector<std::string> dataset_names() { return {"asbestos", "americas"}; }

}  // namespace tcalib::io
