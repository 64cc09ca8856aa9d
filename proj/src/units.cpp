#include "casimir/units.hpp"

#include <cstdlib>
#include <fstream>

#include "json.hpp"

#include "casimir/errors.hpp"

namespace casimir {

PhysicalConstants load_constants_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open constants file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("constants file '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("constants file '" + path + "' must hold a JSON object");

    PhysicalConstants out;
    auto read = [&](const char* key, double& field) {
        if (!doc.contains(key)) return;
        if (!doc[key].is_number()) throw ConfigError(std::string("constants file: '") + key + "' must be a number");
        field = doc[key].get<double>();
        if (!(field > 0.0)) throw ConfigError(std::string("constants file: '") + key + "' must be positive");
    };
    read("hbar", out.hbar);
    read("c", out.c);
    read("k_B", out.k_B);
    read("eV", out.eV);
    out.version = doc.value("version", std::string("custom:") + path);
    return out;
}

const PhysicalConstants& constants() {
    static const PhysicalConstants instance = [] {
        if (const char* path = std::getenv("CASIMIR_CONSTANTS_FILE"); path != nullptr && *path != '\0') {
            return load_constants_file(path);
        }
        return PhysicalConstants{};
    }();
    return instance;
}

}  // namespace casimir
