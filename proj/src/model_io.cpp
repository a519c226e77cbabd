#include "walign/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace walign::model_io {

namespace {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_matrix(std::string& out, const std::string& key, const Mat& m) {
  out += key;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      out += ' ';
      out += format_full(m(r, c));
    }
  }
  out += '\n';
}

void append_vector(std::string& out, const std::string& key, const Vec& v) {
  out += key;
  for (Index i = 0; i < v.size(); ++i) {
    out += ' ';
    out += format_full(v(i));
  }
  out += '\n';
}

std::string join_channels(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

std::vector<std::string> split_channels(const std::string& joined) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = joined.find(',', begin);
    if (comma == std::string::npos) {
      out.push_back(joined.substr(begin));
      return out;
    }
    out.push_back(joined.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

std::string origin_name(rom::SubspaceOrigin origin) {
  switch (origin) {
    case rom::SubspaceOrigin::physics: return "physics";
    case rom::SubspaceOrigin::pod: return "pod";
    case rom::SubspaceOrigin::dmd: return "dmd";
  }
  return "pod";
}

rom::SubspaceOrigin parse_origin(const std::string& name) {
  if (name == "physics") return rom::SubspaceOrigin::physics;
  if (name == "pod") return rom::SubspaceOrigin::pod;
  if (name == "dmd") return rom::SubspaceOrigin::dmd;
  throw std::invalid_argument("model: unknown subspace origin '" + name + "'");
}

void append_subspace(std::string& out, const std::string& prefix,
                     const rom::Subspace& sub) {
  out += prefix + "_origin " + origin_name(sub.origin) + '\n';
  out += prefix + "_orthonormal " + (sub.orthonormal ? "1" : "0") + '\n';
  out += prefix + "_rows " + std::to_string(sub.states()) + '\n';
  out += prefix + "_cols " + std::to_string(sub.dim()) + '\n';
  append_matrix(out, prefix + "_basis", sub.basis);
  if (sub.eigenvalues) {
    append_vector(out, prefix + "_eigenvalues_re", sub.eigenvalues->real());
    append_vector(out, prefix + "_eigenvalues_im", sub.eigenvalues->imag());
  }
}

class FieldMap {
 public:
  explicit FieldMap(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
      if (line.empty()) continue;
      const std::size_t space = line.find(' ');
      const std::string key =
          space == std::string::npos ? line : line.substr(0, space);
      const std::string value =
          space == std::string::npos ? std::string() : line.substr(space + 1);
      if (!fields_.emplace(key, value).second) {
        throw std::invalid_argument("model: duplicate field '" + key + "'");
      }
    }
  }

  bool has(const std::string& key) const { return fields_.count(key) > 0; }

  const std::string& raw(const std::string& key) const {
    const auto it = fields_.find(key);
    if (it == fields_.end()) {
      throw std::invalid_argument("model: missing field '" + key + "'");
    }
    return it->second;
  }

  double number(const std::string& key) const {
    const auto values = numbers(key);
    if (values.size() != 1) {
      throw std::invalid_argument("model: field '" + key +
                                  "' must hold one number");
    }
    return values[0];
  }

  std::vector<double> numbers(const std::string& key) const {
    std::istringstream stream(raw(key));
    std::vector<double> out;
    double v = 0;
    while (stream >> v) out.push_back(v);
    if (!stream.eof()) {
      throw std::invalid_argument("model: field '" + key +
                                  "' holds non-numeric data");
    }
    return out;
  }

  Mat matrix(const std::string& key, Index rows, Index cols) const {
    const auto values = numbers(key);
    if (static_cast<Index>(values.size()) != rows * cols) {
      throw std::invalid_argument("model: field '" + key + "' expects " +
                                  std::to_string(rows * cols) + " values");
    }
    Mat m(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) m(r, c) = values[r * cols + c];
    return m;
  }

  Vec vector(const std::string& key, Index size) const {
    return matrix(key, size, 1);
  }

 private:
  std::map<std::string, std::string> fields_;
};

rom::Subspace parse_subspace(const FieldMap& fields,
                             const std::string& prefix) {
  rom::Subspace sub;
  sub.origin = parse_origin(fields.raw(prefix + "_origin"));
  sub.orthonormal = fields.number(prefix + "_orthonormal") != 0.0;
  const Index rows = static_cast<Index>(fields.number(prefix + "_rows"));
  const Index cols = static_cast<Index>(fields.number(prefix + "_cols"));
  sub.basis = fields.matrix(prefix + "_basis", rows, cols);
  if (fields.has(prefix + "_eigenvalues_re")) {
    const Vec re = fields.vector(prefix + "_eigenvalues_re", cols);
    const Vec im = fields.vector(prefix + "_eigenvalues_im", cols);
    CVec values(cols);
    values.real() = re;
    values.imag() = im;
    sub.eigenvalues = values;
  }
  sub.validate();
  return sub;
}

}  // namespace

std::string to_string(const align::AlignmentModel& model) {
  model.validate();
  std::string out = "walign_alignment_model 1\n";
  out += "method " + align::method_name(model.method) + '\n';
  out += "source_channels " + join_channels(model.source_meta.channels) + '\n';
  out += "target_channels " + join_channels(model.target_meta.channels) + '\n';
  out += "dt " + format_full(model.target_meta.dt) + '\n';
  append_subspace(out, "source", model.source_basis);
  append_subspace(out, "target", model.target_basis);
  append_vector(out, "source_mean", model.source_mean);
  append_vector(out, "target_mean", model.target_mean);
  if (model.method == align::Method::bergman) {
    append_matrix(out, "bergman_map", model.bergman_map);
  } else {
    append_matrix(out, "rotation", model.rotation);
    out += "scale " + format_full(model.scale) + '\n';
    append_vector(out, "translation", model.translation);
  }
  return out;
}

align::AlignmentModel parse(std::string_view text) {
  const FieldMap fields(text);
  if (fields.number("walign_alignment_model") != 1.0) {
    throw std::invalid_argument("model: unsupported document version");
  }
  align::AlignmentModel model;
  const std::string method = fields.raw("method");
  if (method == "bergman") {
    model.method = align::Method::bergman;
  } else if (method == "procrustes") {
    model.method = align::Method::procrustes;
  } else {
    throw std::invalid_argument("model: unknown method '" + method + "'");
  }
  model.source_basis = parse_subspace(fields, "source");
  model.target_basis = parse_subspace(fields, "target");
  model.source_mean = fields.vector("source_mean", model.source_basis.states());
  model.target_mean = fields.vector("target_mean", model.target_basis.states());
  model.source_meta.channels = split_channels(fields.raw("source_channels"));
  model.target_meta.channels = split_channels(fields.raw("target_channels"));
  model.source_meta.dt = model.target_meta.dt = fields.number("dt");
  const Index d = model.source_basis.dim();
  if (model.method == align::Method::bergman) {
    model.bergman_map =
        fields.matrix("bergman_map", d, model.target_basis.dim());
  } else {
    model.rotation = fields.matrix("rotation", d, d);
    model.scale = fields.number("scale");
    model.translation = fields.vector("translation", d);
  }
  model.validate();
  return model;
}

void write_model(const align::AlignmentModel& model,
                 const std::filesystem::path& path) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw std::runtime_error("model: cannot open '" + path.string() +
                             "' for writing");
  }
  stream << to_string(model);
  if (!stream) {
    throw std::runtime_error("model: write to '" + path.string() + "' failed");
  }
}

align::AlignmentModel read_model(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw std::runtime_error("model: cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse(buffer.str());
}

}  // namespace walign::model_io
