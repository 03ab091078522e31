#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "gaborlab/certificate.hpp"

namespace gaborlab {

namespace {

using nlohmann::json;

json complex_vector_to_json(const std::vector<cplx>& v) {
    json arr = json::array();
    for (const cplx& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

std::vector<cplx> complex_vector_from_json(const json& arr) {
    std::vector<cplx> out;
    for (const auto& e : arr) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
}

}  // namespace

std::string certificate_to_json(const SparkCertificate& cert, int indent) {
    json j;
    j["schema_version"] = cert.schema_version;
    j["group"] = cert.group.moduli();
    j["kind"] = cert_kind_name(cert.kind);
    json pts = json::array();
    for (const auto& p : cert.points) pts.push_back({p.shift.coords, p.freq.coords});
    j["points"] = pts;
    j["witness"] = cert.witness ? complex_vector_to_json(*cert.witness) : json(nullptr);
    j["claims"] = {{"lambda_size", cert.claims.lambda_size},
                   {"rank_bound", cert.claims.rank_bound},
                   {"stft_bound",
                    cert.claims.stft_bound ? json(*cert.claims.stft_bound) : json(nullptr)}};
    json prov;
    prov["seed"] = cert.provenance.seed ? json(*cert.provenance.seed) : json(nullptr);
    if (cert.provenance.subgroup) {
        prov["subgroup"] = {{"moduli", cert.provenance.subgroup->moduli},
                            {"generators", cert.provenance.subgroup->generator_images}};
    } else {
        prov["subgroup"] = nullptr;
    }
    prov["parent"] = cert.provenance.parent ? json(*cert.provenance.parent) : json(nullptr);
    prov["window"] =
        cert.provenance.window ? complex_vector_to_json(*cert.provenance.window) : json(nullptr);
    prov["exact"] = cert.provenance.exact;
    j["provenance"] = prov;
    return j.dump(indent) + "\n";
}

SparkCertificate certificate_from_json(const std::string& text) {
    json j = json::parse(text);
    FiniteAbelianGroup group(j.at("group").get<std::vector<int>>());
    SparkCertificate cert(group, cert_kind_from_name(j.at("kind").get<std::string>()));
    cert.schema_version = j.at("schema_version").get<int>();
    if (cert.schema_version != 1)
        throw std::invalid_argument("unsupported certificate schema_version");
    for (const auto& p : j.at("points")) {
        TimeFrequencyPoint pt{GroupElement{p.at(0).get<std::vector<int>>()},
                              Character{p.at(1).get<std::vector<int>>()}};
        cert.points.push_back(std::move(pt));
    }
    if (!j.at("witness").is_null()) cert.witness = complex_vector_from_json(j.at("witness"));
    const auto& claims = j.at("claims");
    cert.claims.lambda_size = claims.at("lambda_size").get<int>();
    cert.claims.rank_bound = claims.at("rank_bound").get<int>();
    if (!claims.at("stft_bound").is_null())
        cert.claims.stft_bound = claims.at("stft_bound").get<long long>();
    const auto& prov = j.at("provenance");
    if (!prov.at("seed").is_null())
        cert.provenance.seed = prov.at("seed").get<std::uint64_t>();
    if (!prov.at("subgroup").is_null()) {
        CertSubgroupInfo info;
        info.moduli = prov.at("subgroup").at("moduli").get<std::vector<int>>();
        info.generator_images =
            prov.at("subgroup").at("generators").get<std::vector<std::vector<int>>>();
        cert.provenance.subgroup = std::move(info);
    }
    if (!prov.at("parent").is_null())
        cert.provenance.parent = prov.at("parent").get<std::string>();
    if (!prov.at("window").is_null())
        cert.provenance.window = complex_vector_from_json(prov.at("window"));
    if (prov.contains("exact")) cert.provenance.exact = prov.at("exact").get<bool>();
    return cert;
}

void save_certificate(const SparkCertificate& cert, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << certificate_to_json(cert);
}

SparkCertificate load_certificate(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return certificate_from_json(text);
}

}  // namespace gaborlab
