#ifndef VML_TEST_HELPERS_HPP
#define VML_TEST_HELPERS_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "analyzer.hpp"
#include "parser.hpp"
#include "problem.hpp"

namespace vmltest {

inline std::string fixture_path(const std::string& name) {
  return std::string(VML_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline vml::ParseResult parse_fixture(const std::string& name) {
  return vml::parse_model(read_fixture(name), name);
}

inline vml::AnalysisResult analyze_text(const std::string& text,
                                        const std::string& name = "<test>") {
  vml::ParseResult parsed = vml::parse_model(text, name);
  if (parsed.diags.has_errors()) {
    vml::AnalysisResult failed;
    failed.diags = parsed.diags;
    return failed;
  }
  return vml::analyze(std::make_shared<vml::Model>(std::move(parsed.model)));
}

inline vml::AnalysisResult analyze_fixture(const std::string& name) {
  return analyze_text(read_fixture(name), name);
}

struct Lowered {
  vml::AnalysisResult analysis;
  vml::ConstraintProblem problem;
  vml::DiagnosticList lower_diags;
};

inline Lowered lower_text(const std::string& text, int segments = 5,
                          const std::string& name = "<test>") {
  Lowered out;
  out.analysis = analyze_text(text, name);
  if (!out.analysis.diags.has_errors() && out.analysis.model)
    out.problem = vml::lower(out.analysis.model, out.analysis.normalization, segments,
                             out.lower_diags);
  return out;
}

inline Lowered lower_fixture(const std::string& name, int segments = 5) {
  return lower_text(read_fixture(name), segments, name);
}

}  // namespace vmltest

#endif
