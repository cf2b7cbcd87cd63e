#include "tvi/io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

namespace tvi {
namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding \"") + name + "\"");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

int int_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) throw ParseError(std::string("field \"") + name + "\" must be an integer");
  return v.get<int>();
}

int nonneg_int(const Json& v, const char* what) {
  if (!v.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  int n = v.get<int>();
  if (n < 0) throw ParseError(std::string(what) + " must be nonnegative");
  return n;
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + " must be a number");
  return v.get<double>();
}

Window window_from_json(const Json& v) {
  if (!v.is_array() || v.size() != 2) throw ParseError("\"window\" must be [lo, hi]");
  if (!v[0].is_number_integer() || !v[1].is_number_integer())
    throw ParseError("\"window\" entries must be integers");
  Window w{};
  w.lo = v[0].get<int>();
  w.hi = v[1].get<int>();
  return w;
}

Json window_to_json(const Window& w) { return Json::array({w.lo, w.hi}); }

std::vector<int> dims_from_json(const Json& v, const Window& w, const char* name) {
  if (!v.is_array()) throw ParseError(std::string("\"") + name + "\" must be an array");
  int width = w.hi - w.lo + 1;
  if (width < 0) width = 0;
  if (static_cast<int>(v.size()) != width)
    throw ParseError(std::string("\"") + name + "\" must list one dimension per window index");
  std::vector<int> dims;
  dims.reserve(v.size());
  for (const Json& d : v) dims.push_back(nonneg_int(d, name));
  return dims;
}

Json dims_to_json(const BlockSpace& s) {
  Json a = Json::array();
  for (int k = s.window().lo; k <= s.window().hi; ++k) a.push_back(s.dim(k));
  return a;
}

std::vector<Mat> matrix_list_from_json(const Json& v, size_t count, const char* name) {
  if (!v.is_array() || v.size() != count)
    throw ParseError(std::string("\"") + name + "\" must be an array with one matrix per window index");
  std::vector<Mat> out;
  out.reserve(count);
  for (const Json& m : v) out.push_back(matrix_from_json(m));
  return out;
}

Json matrix_list_to_json(const std::vector<Mat>& list) {
  Json a = Json::array();
  for (const Mat& m : list) a.push_back(matrix_to_json(m));
  return a;
}

}  // namespace

Json matrix_to_json(const Mat& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    data.push_back(std::move(row));
  }
  Json j;
  j["rows"] = static_cast<int>(m.rows());
  j["cols"] = static_cast<int>(m.cols());
  j["data"] = std::move(data);
  return j;
}

Mat matrix_from_json(const Json& j) {
  int rows = nonneg_int(field(j, "rows"), "\"rows\"");
  int cols = nonneg_int(field(j, "cols"), "\"cols\"");
  const Json& data = field(j, "data");
  if (!data.is_array() || static_cast<int>(data.size()) != rows)
    throw ParseError("matrix \"data\" must hold one array per row");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Json& row = data[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ParseError("matrix row has the wrong number of entries");
    for (int c = 0; c < cols; ++c) {
      const Json& e = row[static_cast<size_t>(c)];
      if (!e.is_array() || e.size() != 2)
        throw ParseError("matrix entries must be [re, im] pairs");
      m(r, c) = Complex(number(e[0], "matrix entry"), number(e[1], "matrix entry"));
    }
  }
  return m;
}

Json block_matrix_to_json(const BlockMatrix& m) {
  Json blocks = Json::array();
  for (int j = m.window().lo; j <= m.window().hi; ++j) {
    for (int k = m.window().lo; k <= m.window().hi; ++k) {
      if (!m.has_block(j, k)) continue;
      Json b;
      b["j"] = j;
      b["k"] = k;
      b["data"] = matrix_to_json(m.block(j, k));
      blocks.push_back(std::move(b));
    }
  }
  Json out;
  out["window"] = window_to_json(m.window());
  out["dims_codomain"] = dims_to_json(m.codomain());
  out["dims_domain"] = dims_to_json(m.domain());
  out["blocks"] = std::move(blocks);
  return out;
}

BlockMatrix block_matrix_from_json(const Json& j) {
  Window w = window_from_json(field(j, "window"));
  BlockSpace cod(w, dims_from_json(field(j, "dims_codomain"), w, "dims_codomain"));
  BlockSpace dom(w, dims_from_json(field(j, "dims_domain"), w, "dims_domain"));
  BlockMatrix m(cod, dom);
  const Json& blocks = field(j, "blocks");
  if (!blocks.is_array()) throw ParseError("\"blocks\" must be an array");
  for (const Json& b : blocks) {
    int bj = int_field(b, "j");
    int bk = int_field(b, "k");
    if (bj < w.lo || bj > w.hi || bk < w.lo || bk > w.hi)
      throw ParseError("block index outside the window");
    m.set_block(bj, bk, matrix_from_json(field(b, "data")));
  }
  return m;
}

Json tolerance_to_json(const Tolerance& tol) {
  Json j;
  j["rank"] = tol.rank;
  j["psd"] = tol.psd;
  j["eq"] = tol.eq;
  return j;
}

Tolerance tolerance_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("\"tolerances\" must be an object");
  Tolerance tol;
  if (auto it = j.find("rank"); it != j.end()) tol.rank = number(*it, "\"rank\"");
  if (auto it = j.find("psd"); it != j.end()) tol.psd = number(*it, "\"psd\"");
  if (auto it = j.find("eq"); it != j.end()) tol.eq = number(*it, "\"eq\"");
  if (tol.rank <= 0 || tol.psd <= 0 || tol.eq <= 0)
    throw ParseError("tolerances must be positive");
  return tol;
}

Json interpolation_to_json(const InterpolationData& data) {
  Json cols = Json::array();
  for (int k = data.window.lo; k <= data.window.hi; ++k) {
    const ColumnConstraint& c = data.at(k);
    Json jc;
    jc["basis"] = matrix_to_json(c.space.basis);
    jc["to_output"] = matrix_to_json(c.to_output);
    jc["to_prev"] = matrix_to_json(c.to_prev);
    cols.push_back(std::move(jc));
  }
  Json j;
  j["window"] = window_to_json(data.window);
  j["dims_in"] = dims_to_json(data.in_space);
  j["dims_out"] = dims_to_json(data.out_space);
  j["columns"] = std::move(cols);
  return j;
}

InterpolationData interpolation_from_json(const Json& j) {
  InterpolationData data;
  data.window = window_from_json(field(j, "window"));
  data.in_space = BlockSpace(data.window, dims_from_json(field(j, "dims_in"), data.window, "dims_in"));
  data.out_space =
      BlockSpace(data.window, dims_from_json(field(j, "dims_out"), data.window, "dims_out"));
  const Json& cols = field(j, "columns");
  int width = data.window.hi - data.window.lo + 1;
  if (width < 0) width = 0;
  if (!cols.is_array() || static_cast<int>(cols.size()) != width)
    throw ParseError("\"columns\" must hold one entry per window index");
  for (int k = data.window.lo; k <= data.window.hi; ++k) {
    const Json& jc = cols[static_cast<size_t>(k - data.window.lo)];
    ColumnConstraint c;
    Mat basis = matrix_from_json(field(jc, "basis"));
    if (basis.rows() != data.in_space.dim(k))
      throw ShapeError("column basis does not live in the input block");
    c.space = Subspace{static_cast<int>(basis.rows()), basis};
    c.to_output = matrix_from_json(field(jc, "to_output"));
    c.to_prev = matrix_from_json(field(jc, "to_prev"));
    int prev = (k > data.window.lo) ? data.in_space.dim(k - 1) : 0;
    if (c.to_output.rows() != data.out_space.dim(k) || c.to_output.cols() != basis.cols() ||
        c.to_prev.rows() != prev || c.to_prev.cols() != basis.cols())
      throw ShapeError("column target matrices do not match the declared dimensions");
    data.cols.push_back(std::move(c));
  }
  return data;
}

Json pair_to_json(const SchurPair& pair) {
  Json j;
  j["top"] = block_matrix_to_json(pair.top);
  j["bottom"] = block_matrix_to_json(pair.bottom);
  return j;
}

SchurPair pair_from_json(const Json& j) {
  return SchurPair{block_matrix_from_json(field(j, "top")),
                   block_matrix_from_json(field(j, "bottom"))};
}

Json lifting_to_json(const LiftingProblem& prob) {
  Json j;
  j["window"] = window_to_json(prob.window);
  j["dims_source"] = dims_to_json(prob.source);
  j["dims_target"] = dims_to_json(prob.target);
  j["dims_anchor"] = dims_to_json(prob.anchor);
  j["to_lift"] = matrix_list_to_json(prob.to_lift);
  j["evolution"] = matrix_list_to_json(prob.evolution);
  j["relax_old"] = matrix_list_to_json(prob.relax_old);
  j["relax_new"] = matrix_list_to_json(prob.relax_new);
  return j;
}

LiftingProblem lifting_from_json(const Json& j) {
  LiftingProblem prob;
  prob.window = window_from_json(field(j, "window"));
  prob.source = BlockSpace(prob.window, dims_from_json(field(j, "dims_source"), prob.window, "dims_source"));
  prob.target = BlockSpace(prob.window, dims_from_json(field(j, "dims_target"), prob.window, "dims_target"));
  prob.anchor = BlockSpace(prob.window, dims_from_json(field(j, "dims_anchor"), prob.window, "dims_anchor"));
  size_t width = static_cast<size_t>(std::max(0, prob.window.hi - prob.window.lo + 1));
  prob.to_lift = matrix_list_from_json(field(j, "to_lift"), width, "to_lift");
  prob.evolution = matrix_list_from_json(field(j, "evolution"), width, "evolution");
  prob.relax_old = matrix_list_from_json(field(j, "relax_old"), width, "relax_old");
  prob.relax_new = matrix_list_from_json(field(j, "relax_new"), width, "relax_new");
  return prob;
}

Json lift_sequence_to_json(const LiftSequence& seq) {
  Json j;
  j["window"] = window_to_json(seq.window);
  j["columns"] = matrix_list_to_json(seq.columns);
  return j;
}

LiftSequence lift_sequence_from_json(const Json& j) {
  LiftSequence seq;
  seq.window = window_from_json(field(j, "window"));
  size_t width = static_cast<size_t>(std::max(0, seq.window.hi - seq.window.lo + 1));
  seq.columns = matrix_list_from_json(field(j, "columns"), width, "columns");
  return seq;
}

Json state_space_to_json(const StateSpaceSystem& sys) {
  Json j;
  j["state"] = matrix_to_json(sys.a);
  j["input"] = matrix_to_json(sys.b);
  j["output"] = matrix_to_json(sys.e);
  j["feedthrough"] = block_matrix_to_json(sys.d);
  return j;
}

StateSpaceSystem state_space_from_json(const Json& j, const Tolerance& tol) {
  Mat a = matrix_from_json(field(j, "state"));
  Mat b = matrix_from_json(field(j, "input"));
  Mat e = matrix_from_json(field(j, "output"));
  BlockMatrix d = block_matrix_from_json(field(j, "feedthrough"));
  return make_state_space(std::move(a), std::move(b), std::move(e), std::move(d), tol);
}

Json completion_to_json(const CompletionInstance4x4& inst) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int c = 0; c < 4; ++c)
      row.push_back(matrix_to_json(inst.entry[static_cast<size_t>(i)][static_cast<size_t>(c)]));
    rows.push_back(std::move(row));
  }
  Json j;
  j["dims_in"] = Json::array({inst.in_dims[0], inst.in_dims[1], inst.in_dims[2], inst.in_dims[3]});
  j["dims_out"] =
      Json::array({inst.out_dims[0], inst.out_dims[1], inst.out_dims[2], inst.out_dims[3]});
  j["entries"] = std::move(rows);
  j["overlap_residual"] = inst.overlap_residual;
  return j;
}

CompletionInstance4x4 completion_from_json(const Json& j) {
  CompletionInstance4x4 inst;
  const Json& din = field(j, "dims_in");
  const Json& dout = field(j, "dims_out");
  if (!din.is_array() || din.size() != 4 || !dout.is_array() || dout.size() != 4)
    throw ParseError("\"dims_in\" and \"dims_out\" must each list four dimensions");
  for (size_t i = 0; i < 4; ++i) {
    inst.in_dims[i] = nonneg_int(din[i], "dims_in");
    inst.out_dims[i] = nonneg_int(dout[i], "dims_out");
  }
  const Json& rows = field(j, "entries");
  if (!rows.is_array() || rows.size() != 4) throw ParseError("\"entries\" must be a 4x4 grid");
  for (size_t i = 0; i < 4; ++i) {
    if (!rows[i].is_array() || rows[i].size() != 4)
      throw ParseError("\"entries\" must be a 4x4 grid");
    for (size_t c = 0; c < 4; ++c) {
      Mat m = matrix_from_json(rows[i][c]);
      if (m.rows() != inst.out_dims[i] || m.cols() != inst.in_dims[c])
        throw ShapeError("completion entry does not match the declared dimensions");
      inst.entry[i][c] = std::move(m);
    }
  }
  if (auto it = j.find("overlap_residual"); it != j.end())
    inst.overlap_residual = number(*it, "\"overlap_residual\"");
  return inst;
}

ProblemFile problem_file_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw ParseError("\"kind\" must be a string");
  ProblemFile f;
  f.kind = kind.get<std::string>();
  f.payload = field(j, "payload");
  if (auto it = j.find("tolerances"); it != j.end()) f.tolerances = tolerance_from_json(*it);
  return f;
}

Json problem_file_to_json(const std::string& kind, Json payload,
                          const std::optional<Tolerance>& tolerances) {
  Json j;
  j["kind"] = kind;
  j["payload"] = std::move(payload);
  if (tolerances) j["tolerances"] = tolerance_to_json(*tolerances);
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Json j = Json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON in " + path);
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ParseError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw ParseError("failed writing " + path);
}

}  // namespace tvi
