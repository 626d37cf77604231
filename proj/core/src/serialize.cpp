#include "wassheat/serialize.hpp"

#include <fstream>
#include <set>

namespace wassheat {

namespace {

std::string radial_profile_name(RadialDifferenceKernel::Profile p) {
    switch (p) {
        case RadialDifferenceKernel::Profile::Gauss: return "gauss";
        case RadialDifferenceKernel::Profile::CosFreq: return "cos_freq";
        case RadialDifferenceKernel::Profile::Quadratic: return "quadratic";
        case RadialDifferenceKernel::Profile::Quartic: return "quartic";
        case RadialDifferenceKernel::Profile::InverseQuadratic: return "inverse_quadratic";
    }
    throw ConfigError("unknown radial profile enum value");
}

RadialDifferenceKernel::Profile radial_profile_from_name(const std::string& name) {
    if (name == "gauss") return RadialDifferenceKernel::Profile::Gauss;
    if (name == "cos_freq") return RadialDifferenceKernel::Profile::CosFreq;
    if (name == "quadratic") return RadialDifferenceKernel::Profile::Quadratic;
    if (name == "quartic") return RadialDifferenceKernel::Profile::Quartic;
    if (name == "inverse_quadratic") return RadialDifferenceKernel::Profile::InverseQuadratic;
    throw ConfigError("unknown radial profile \"" + name + "\"");
}

double number_at(const Json& j, const char* key, const std::string& where) {
    if (!j.at(key).is_number())
        throw ConfigError(where + ": \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

int int_at(const Json& j, const char* key, const std::string& where) {
    if (!j.at(key).is_number_integer())
        throw ConfigError(where + ": \"" + key + "\" must be an integer");
    return j.at(key).get<int>();
}

}  // namespace

Json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

void require_keys(const Json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    std::set<std::string> allowed;
    for (const char* key : required) {
        allowed.insert(key);
        if (!j.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
    }
    for (const char* key : optional) allowed.insert(key);
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
}

Mat mat_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array");
    const auto& first = j.front();
    if (!first.is_array() || first.empty())
        throw ConfigError(where + ": expected an array of nonempty rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(first.size());
    Mat out(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = j.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw ConfigError(where + ": ragged rows");
        for (int c = 0; c < cols; ++c) {
            if (!row.at(c).is_number()) throw ConfigError(where + ": non-numeric entry");
            out(r, c) = row.at(c).get<double>();
        }
    }
    return out;
}

Vec vec_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array");
    Vec out(static_cast<int>(j.size()));
    for (int i = 0; i < static_cast<int>(j.size()); ++i) {
        if (!j.at(i).is_number()) throw ConfigError(where + ": non-numeric entry");
        out[i] = j.at(i).get<double>();
    }
    return out;
}

Json mat_to_json(const Mat& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json vec_to_json(const Vec& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

// --------------------------------------------------------------------------
// measures
// --------------------------------------------------------------------------

SmoothedMeasure measure_from_json(const Json& j) {
    require_keys(j, {"dim", "atoms", "weights"}, {"variance"}, "measure");
    const int dim = int_at(j, "dim", "measure");
    const Mat atoms = mat_from_json(j.at("atoms"), "measure.atoms");
    if (static_cast<int>(atoms.cols()) != dim)
        throw ConfigError("measure: atoms have " + std::to_string(atoms.cols()) +
                          " columns but dim = " + std::to_string(dim));
    const Vec weights = vec_from_json(j.at("weights"), "measure.weights");
    SmoothedMeasure out;
    out.base = make_discrete(atoms, weights);
    if (j.contains("variance")) {
        out.variance = number_at(j, "variance", "measure");
        if (!(out.variance >= 0.0)) throw NegativeVariance(std::to_string(out.variance));
    }
    return out;
}

Json measure_to_json(const SmoothedMeasure& m) {
    Json j = measure_to_json(m.base);
    if (m.variance > 0.0) j["variance"] = m.variance;
    return j;
}

Json measure_to_json(const DiscreteMeasure& m) {
    Json j;
    j["dim"] = m.dim;
    j["atoms"] = mat_to_json(m.atoms);
    j["weights"] = vec_to_json(m.weights);
    return j;
}

SmoothedMeasure load_measure(const std::string& path) {
    return measure_from_json(parse_json_file(path));
}

void save_measure(const std::string& path, const SmoothedMeasure& m) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << measure_to_json(m).dump(2) << "\n";
}

// --------------------------------------------------------------------------
// kernels
// --------------------------------------------------------------------------

std::shared_ptr<SymmetricKernel> kernel_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family"))
        throw ConfigError("kernel: missing \"family\"");
    const std::string family = j.at("family").get<std::string>();

    if (family == "exponential") {
        require_keys(j, {"family", "xi"}, {}, "kernel(exponential)");
        return std::make_shared<ExponentialKernel>(
            mat_from_json(j.at("xi"), "kernel.xi"));
    }
    if (family == "tensor_poly") {
        require_keys(j, {"family", "exponents"}, {}, "kernel(tensor_poly)");
        const Mat e = mat_from_json(j.at("exponents"), "kernel.exponents");
        Eigen::MatrixXi ei(e.rows(), e.cols());
        for (int r = 0; r < e.rows(); ++r)
            for (int c = 0; c < e.cols(); ++c) {
                const double v = e(r, c);
                if (v < 0.0 || v != std::floor(v))
                    throw ConfigError("kernel.exponents: entries must be integers >= 0");
                ei(r, c) = static_cast<int>(v);
            }
        return std::make_shared<TensorPolynomialKernel>(ei);
    }
    if (family == "radial_difference") {
        require_keys(j, {"family", "f", "dim"}, {"scale"}, "kernel(radial_difference)");
        const auto profile = radial_profile_from_name(j.at("f").get<std::string>());
        const int dim = int_at(j, "dim", "kernel");
        const double scale = j.contains("scale") ? number_at(j, "scale", "kernel") : 1.0;
        return std::make_shared<RadialDifferenceKernel>(dim, profile, scale);
    }
    if (family == "bump_product") {
        require_keys(j, {"family", "k", "dim", "radius"}, {"alpha", "tilt"},
                     "kernel(bump_product)");
        const int k = int_at(j, "k", "kernel");
        const int dim = int_at(j, "dim", "kernel");
        const double R = number_at(j, "radius", "kernel");
        const double alpha = j.contains("alpha") ? number_at(j, "alpha", "kernel") : 0.0;
        std::optional<Vec> tilt;
        if (j.contains("tilt")) tilt = vec_from_json(j.at("tilt"), "kernel.tilt");
        return std::make_shared<BumpProductKernel>(k, dim, R, alpha, tilt);
    }
    throw ConfigError("kernel: unknown family \"" + family + "\"");
}

Json kernel_to_json(const SymmetricKernel& kernel) {
    Json j;
    if (const auto* e = dynamic_cast<const ExponentialKernel*>(&kernel)) {
        j["family"] = "exponential";
        j["xi"] = mat_to_json(e->frequencies());
        return j;
    }
    if (const auto* t = dynamic_cast<const TensorPolynomialKernel*>(&kernel)) {
        j["family"] = "tensor_poly";
        j["exponents"] = mat_to_json(t->exponents().cast<double>());
        return j;
    }
    if (const auto* r = dynamic_cast<const RadialDifferenceKernel*>(&kernel)) {
        j["family"] = "radial_difference";
        j["f"] = radial_profile_name(r->profile());
        j["dim"] = r->dim();
        j["scale"] = r->scale();
        return j;
    }
    if (const auto* b = dynamic_cast<const BumpProductKernel*>(&kernel)) {
        j["family"] = "bump_product";
        j["k"] = b->arity();
        j["dim"] = b->dim();
        j["radius"] = b->radius();
        j["alpha"] = b->alpha();
        j["tilt"] = vec_to_json(b->tilt());
        return j;
    }
    throw ConfigError("kernel family has no JSON representation");
}

std::shared_ptr<SymmetricKernel> load_kernel(const std::string& path) {
    return kernel_from_json(parse_json_file(path));
}

// --------------------------------------------------------------------------
// spectral coefficients
// --------------------------------------------------------------------------

SpectralCoefficients coefficients_from_json(const Json& j) {
    require_keys(j, {"degrees"}, {"decay"}, "coefficients");
    if (!j.at("degrees").is_array()) throw ConfigError("coefficients.degrees: expected array");

    SpectralCoefficients out;
    for (const Json& dj : j.at("degrees")) {
        require_keys(dj, {"k", "nodes", "quad_weights", "values_re", "values_im"}, {},
                     "coefficients.degrees[]");
        const int k = int_at(dj, "k", "coefficients");
        if (out.degrees.count(k))
            throw ConfigError("coefficients: duplicate degree " + std::to_string(k));
        if (!dj.at("nodes").is_array() || dj.at("nodes").empty())
            throw ConfigError("coefficients.nodes: expected nonempty array");

        std::vector<Mat> nodes;
        nodes.reserve(dj.at("nodes").size());
        int dim = -1;
        for (const Json& nj : dj.at("nodes")) {
            Mat node = mat_from_json(nj, "coefficients.nodes[]");
            if (static_cast<int>(node.rows()) != k)
                throw ConfigError("coefficients: node row count != degree");
            if (dim < 0) dim = static_cast<int>(node.cols());
            nodes.push_back(std::move(node));
        }
        const Vec qw = vec_from_json(dj.at("quad_weights"), "coefficients.quad_weights");
        const Vec re = vec_from_json(dj.at("values_re"), "coefficients.values_re");
        const Vec im = vec_from_json(dj.at("values_im"), "coefficients.values_im");
        if (re.size() != im.size() || static_cast<size_t>(re.size()) != nodes.size())
            throw ConfigError("coefficients: values/nodes length mismatch");
        VecC values(re.size());
        values.real() = re;
        values.imag() = im;
        out.degrees[k] = make_block(make_grid(k, dim, std::move(nodes), qw), std::move(values));
    }
    if (j.contains("decay")) {
        const Json& dj = j.at("decay");
        require_keys(dj, {"C", "delta"}, {}, "coefficients.decay");
        DecayDeclaration d;
        d.C = number_at(dj, "C", "coefficients.decay");
        d.delta = number_at(dj, "delta", "coefficients.decay");
        if (!(d.C > 0.0)) throw ConfigError("coefficients.decay: C must be > 0");
        out.decay = d;
    }
    return out;
}

Json coefficients_to_json(const SpectralCoefficients& coeffs) {
    Json degrees = Json::array();
    for (const auto& [k, block] : coeffs.degrees) {
        Json dj;
        dj["k"] = k;
        Json nodes = Json::array();
        for (const Mat& node : block.grid.nodes) nodes.push_back(mat_to_json(node));
        dj["nodes"] = std::move(nodes);
        dj["quad_weights"] = vec_to_json(block.grid.quad_weights);
        dj["values_re"] = vec_to_json(block.values.real());
        dj["values_im"] = vec_to_json(block.values.imag());
        degrees.push_back(std::move(dj));
    }
    Json j;
    j["degrees"] = std::move(degrees);
    if (coeffs.decay) j["decay"] = Json{{"C", coeffs.decay->C}, {"delta", coeffs.decay->delta}};
    return j;
}

SpectralCoefficients load_coefficients(const std::string& path) {
    return coefficients_from_json(parse_json_file(path));
}

void save_coefficients(const std::string& path, const SpectralCoefficients& coeffs) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << coefficients_to_json(coeffs).dump(2) << "\n";
}

}  // namespace wassheat
