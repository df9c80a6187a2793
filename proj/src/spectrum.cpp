#include "piml/spectrum.hpp"

#include <sstream>
#include <stdexcept>

#include "piml/io.hpp"

namespace piml {

std::string provenance_label(const EigProvenance& p) {
  const char* tag = nullptr;
  switch (p.source) {
    case EigSource::quant_symmetric: tag = "sym"; break;
    case EigSource::quant_antisymmetric: tag = "anti"; break;
    case EigSource::galerkin: tag = "galerkin"; break;
  }
  return std::string(tag) + ":" + std::to_string(p.branch_index);
}

EigProvenance parse_provenance(const std::string& label) {
  const auto pos = label.find(':');
  if (pos == std::string::npos)
    throw std::runtime_error("bad provenance label: " + label);
  const std::string tag = label.substr(0, pos);
  EigProvenance p;
  if (tag == "sym") p.source = EigSource::quant_symmetric;
  else if (tag == "anti") p.source = EigSource::quant_antisymmetric;
  else if (tag == "galerkin") p.source = EigSource::galerkin;
  else throw std::runtime_error("bad provenance label: " + label);
  p.branch_index = std::stoi(label.substr(pos + 1));
  return p;
}

void Spectrum::validate() const {
  if (eigenvalues.size() != provenance.size())
    throw std::logic_error("spectrum: provenance length mismatch");
  double prev = 0.0;
  for (std::size_t m = 0; m < eigenvalues.size(); ++m) {
    const double a = eigenvalues[m];
    if (!(a > 0.0)) throw std::logic_error("spectrum: nonpositive eigenvalue");
    if (m > 0 && a > prev)
      throw std::logic_error("spectrum: not sorted non-increasing");
    prev = a;
  }
}

std::string spectrum_to_csv(const Spectrum& spec) {
  std::ostringstream out;
  out << "# lambda=" << format_double(spec.params.lambda)
      << " mu=" << format_double(spec.params.mu)
      << " L=" << format_double(spec.params.L) << " s=" << spec.params.s
      << " d=" << spec.params.d << "\n";
  out << "m,a_m,provenance\n";
  for (std::size_t m = 0; m < spec.eigenvalues.size(); ++m) {
    out << m << "," << format_double(spec.eigenvalues[m]) << ","
        << provenance_label(spec.provenance[m]) << "\n";
  }
  return out.str();
}

Spectrum spectrum_from_csv(const std::string& text) {
  Spectrum spec;
  spec.params.known = false;
  // Pull the metadata comment if present.
  std::istringstream in(text);
  std::string body;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string kv;
      while (meta >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "lambda") spec.params.lambda = parse_double(val);
        else if (key == "mu") spec.params.mu = parse_double(val);
        else if (key == "L") spec.params.L = parse_double(val);
        else if (key == "s") spec.params.s = std::stoi(val);
        else if (key == "d") spec.params.d = std::stoi(val);
      }
      spec.params.known = true;
      continue;
    }
    body += line;
    body += '\n';
  }
  CsvTable table = parse_csv(body);
  const std::size_t col_a = table.column("a_m");
  const std::size_t col_p = table.column("provenance");
  for (const auto& row : table.rows) {
    spec.eigenvalues.push_back(parse_double(row[col_a]));
    spec.provenance.push_back(parse_provenance(row[col_p]));
  }
  spec.validate();
  return spec;
}

}  // namespace piml
