#include "rcc/instance.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rcc {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Line-oriented reader with position tracking for diagnostics.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::istringstream next_line() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      if (!line.empty() && line[0] != '#') {
        return std::istringstream(line);
      }
    }
    fail("unexpected end of file");
    return std::istringstream();
  }

  void expect_keyword(std::istringstream& line, const std::string& keyword) {
    std::string word;
    line >> word;
    if (word != keyword) {
      fail("expected '" + keyword + "', got '" + word + "'");
    }
  }

  double read_double(std::istringstream& line) {
    double v;
    if (!(line >> v)) {
      fail("malformed number");
    }
    return v;
  }

  long read_integer(std::istringstream& line) {
    long v;
    if (!(line >> v)) {
      fail("malformed integer");
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw std::runtime_error("instance file, line " +
                             std::to_string(line_number_) + ": " + message);
  }

 private:
  std::istream& in_;
  int line_number_ = 0;
};

Vector read_vector(Reader& reader, std::istringstream& line, int size) {
  Vector v(size);
  for (int i = 0; i < size; ++i) {
    v[i] = reader.read_double(line);
  }
  return v;
}

}  // namespace

void InstanceSpec::validate() const {
  if (agents < 1) {
    throw std::invalid_argument("need at least one agent");
  }
  if (dimension < 1) {
    throw std::invalid_argument("dimension must be positive");
  }
  if (rows_per_agent < dimension) {
    throw std::invalid_argument("need at least d constraints per agent");
  }
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("radius must be finite and non-negative");
  }
  if (!(box_limit > 0.0) || !std::isfinite(box_limit)) {
    throw std::invalid_argument("box limit must be finite and positive");
  }
}

Instance generate(const InstanceSpec& spec) {
  spec.validate();
  RandomStream rng(derive_seed(spec.seed, 0));

  Instance instance;
  Vector c(spec.dimension);
  for (int j = 0; j < spec.dimension; ++j) {
    c[j] = rng.next_normal();
  }
  instance.objective = Objective(std::move(c));
  instance.box = BoundingBox::centered(spec.dimension, spec.box_limit);

  instance.sets.reserve(spec.agents);
  for (int agent = 0; agent < spec.agents; ++agent) {
    UncertainConstraintSet set;
    set.owner = agent;
    set.nominal.resize(spec.rows_per_agent, spec.dimension);
    for (int r = 0; r < spec.rows_per_agent; ++r) {
      for (int j = 0; j < spec.dimension; ++j) {
        set.nominal(r, j) = rng.next_normal();
      }
    }
    // Right-hand side = nominal row norm, so the origin is feasible for
    // every realization while radius stays below one.
    set.rhs = set.nominal.rowwise().norm();
    set.radius =
        Matrix::Constant(spec.rows_per_agent, spec.dimension, spec.radius);
    set.validate();
    instance.sets.push_back(std::move(set));
  }
  return instance;
}

double feasibility_margin(const Instance& instance, const Vector& theta) {
  if (theta.size() != instance.dimension()) {
    throw std::invalid_argument("point dimension does not match the instance");
  }
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& set : instance.sets) {
    const Vector slack = set.rhs - set.nominal * theta;
    margin = std::min(margin, slack.minCoeff());
  }
  for (int j = 0; j < instance.dimension(); ++j) {
    margin = std::min(margin, instance.box.hi[j] - theta[j]);
    margin = std::min(margin, theta[j] - instance.box.lo[j]);
  }
  return margin;
}

void save_instance(const Instance& instance, std::ostream& out) {
  const int d = instance.dimension();
  out << "rcc-instance v1\n";
  out << "dimension " << d << "\n";
  out << "agents " << instance.agents() << "\n";
  out << "box-lo";
  for (int j = 0; j < d; ++j) {
    out << ' ' << fmt(instance.box.lo[j]);
  }
  out << "\nbox-hi";
  for (int j = 0; j < d; ++j) {
    out << ' ' << fmt(instance.box.hi[j]);
  }
  out << "\nobjective";
  for (int j = 0; j < d; ++j) {
    out << ' ' << fmt(instance.objective.c[j]);
  }
  out << "\n";
  for (const auto& set : instance.sets) {
    const int m = set.rows();
    out << "agent " << set.owner << "\n";
    out << "rows " << m << "\n";
    const bool uniform =
        (set.radius.array() == set.radius(0, 0)).all();
    if (uniform) {
      out << "radius uniform " << fmt(set.radius(0, 0)) << "\n";
    } else {
      out << "radius matrix\n";
      for (int r = 0; r < m; ++r) {
        for (int j = 0; j < d; ++j) {
          out << (j ? " " : "") << fmt(set.radius(r, j));
        }
        out << "\n";
      }
    }
    out << "rhs";
    for (int r = 0; r < m; ++r) {
      out << ' ' << fmt(set.rhs[r]);
    }
    out << "\nnominal\n";
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < d; ++j) {
        out << (j ? " " : "") << fmt(set.nominal(r, j));
      }
      out << "\n";
    }
  }
}

void save_instance_file(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  save_instance(instance, out);
}

Instance load_instance(std::istream& in) {
  Reader reader(in);

  auto header = reader.next_line();
  std::string magic, version;
  header >> magic >> version;
  if (magic != "rcc-instance" || version != "v1") {
    reader.fail("not an rcc-instance v1 file");
  }

  auto dim_line = reader.next_line();
  reader.expect_keyword(dim_line, "dimension");
  const int d = static_cast<int>(reader.read_integer(dim_line));
  auto agents_line = reader.next_line();
  reader.expect_keyword(agents_line, "agents");
  const int n = static_cast<int>(reader.read_integer(agents_line));
  if (d < 1 || n < 1) {
    reader.fail("dimension and agent count must be positive");
  }

  Instance instance;
  auto lo_line = reader.next_line();
  reader.expect_keyword(lo_line, "box-lo");
  instance.box.lo = read_vector(reader, lo_line, d);
  auto hi_line = reader.next_line();
  reader.expect_keyword(hi_line, "box-hi");
  instance.box.hi = read_vector(reader, hi_line, d);

  auto obj_line = reader.next_line();
  reader.expect_keyword(obj_line, "objective");
  instance.objective = Objective(read_vector(reader, obj_line, d));

  instance.sets.reserve(n);
  for (int a = 0; a < n; ++a) {
    auto agent_line = reader.next_line();
    reader.expect_keyword(agent_line, "agent");
    UncertainConstraintSet set;
    set.owner = static_cast<std::int32_t>(reader.read_integer(agent_line));

    auto rows_line = reader.next_line();
    reader.expect_keyword(rows_line, "rows");
    const int m = static_cast<int>(reader.read_integer(rows_line));
    if (m < d) {
      reader.fail("agent needs at least d rows");
    }

    auto radius_line = reader.next_line();
    reader.expect_keyword(radius_line, "radius");
    std::string radius_kind;
    radius_line >> radius_kind;
    if (radius_kind == "uniform") {
      set.radius = Matrix::Constant(m, d, reader.read_double(radius_line));
    } else if (radius_kind == "matrix") {
      set.radius.resize(m, d);
      for (int r = 0; r < m; ++r) {
        auto row = reader.next_line();
        for (int j = 0; j < d; ++j) {
          set.radius(r, j) = reader.read_double(row);
        }
      }
    } else {
      reader.fail("radius must be 'uniform <value>' or 'matrix'");
    }

    auto rhs_line = reader.next_line();
    reader.expect_keyword(rhs_line, "rhs");
    set.rhs = read_vector(reader, rhs_line, m);

    auto nominal_line = reader.next_line();
    reader.expect_keyword(nominal_line, "nominal");
    set.nominal.resize(m, d);
    for (int r = 0; r < m; ++r) {
      auto row = reader.next_line();
      for (int j = 0; j < d; ++j) {
        set.nominal(r, j) = reader.read_double(row);
      }
    }
    set.validate();
    instance.sets.push_back(std::move(set));
  }
  return instance;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open instance file " + path);
  }
  return load_instance(in);
}

}  // namespace rcc
