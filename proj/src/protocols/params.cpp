#include "addnet/protocols/params.hpp"

namespace addnet {

void ProtocolParams::set(const std::string& key, double value) {
    if (key == "c_bic") c_bic = value;
    else if (key == "a_mult") a_mult = value;
    else if (key == "beta") beta = value;
    else if (key == "lambda_mult") lambda_mult = value;
    else if (key == "z_bits_cap") z_bits_cap = uint32_t(value);
    else if (key == "c_deg") c_deg = value;
    else if (key == "deg_threshold") deg_threshold = value;
    else if (key == "c_mark") c_mark = value;
    else if (key == "size_a_mult") size_a_mult = value;
    else if (key == "c_tau") c_tau = value;
    else throw std::invalid_argument("ProtocolParams: unknown key " + key);
}

ProtocolParams ProtocolParams::from_overrides(const std::map<std::string, double>& kv) {
    ProtocolParams p;
    for (const auto& [k, v] : kv) p.set(k, v);
    return p;
}

std::map<std::string, double> ProtocolParams::as_map() const {
    return {
        {"c_bic", c_bic},
        {"a_mult", a_mult},
        {"beta", beta},
        {"lambda_mult", lambda_mult},
        {"z_bits_cap", double(z_bits_cap)},
        {"c_deg", c_deg},
        {"deg_threshold", deg_threshold},
        {"c_mark", c_mark},
        {"size_a_mult", size_a_mult},
        {"c_tau", c_tau},
    };
}

} // namespace addnet
