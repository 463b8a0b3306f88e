#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace stablenoise::cli {

namespace {

std::string scalar_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    throw config_error("config values must be strings, numbers, booleans or arrays of those");
}

std::string value_text(const nlohmann::json& v) {
    if (!v.is_array()) return scalar_text(v);
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + scalar_text(v[i]);
    return s;
}

}  // namespace

std::vector<std::string> merge_config(int argc, char** argv) {
    std::vector<std::string> user(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < user.size(); ++i) {
        if (user[i] == "--config") {
            if (i + 1 >= user.size()) throw config_error("--config needs a file");
            path = user[i + 1];
            user.erase(user.begin() + static_cast<std::ptrdiff_t>(i), user.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (user[i].rfind("--config=", 0) == 0) {
            path = user[i].substr(9);
            user.erase(user.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    std::string command;
    if (!user.empty() && !user[0].empty() && user[0][0] != '-') {
        command = user[0];
        user.erase(user.begin());
    }
    std::vector<std::string> out;
    std::vector<std::string> from_file;
    if (!path.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text(path));
        } catch (const nlohmann::json::exception& e) {
            throw config_error("config " + path + ": " + e.what());
        }
        if (j.contains("config") && j["config"].is_object()) j = j["config"];
        if (!j.is_object()) throw config_error("config " + path + " is not a JSON object");
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "command") {
                const std::string c = it.value().get<std::string>();
                if (command.empty()) command = c;
                else if (command != c) throw config_error("config is for '" + c + "', not '" + command + "'");
                continue;
            }
            from_file.push_back("--" + it.key() + "=" + value_text(it.value()));
        }
    }
    if (!command.empty()) out.push_back(command);
    out.insert(out.end(), from_file.begin(), from_file.end());
    out.insert(out.end(), user.begin(), user.end());
    return out;
}

nlohmann::json resolved_config(const CLI::App& sub) {
    nlohmann::json j;
    j["command"] = sub.get_name();
    for (const CLI::Option* o : sub.get_options()) {
        if (o->get_lnames().empty()) continue;
        const std::string name = o->get_lnames().front();
        if (name == "help") continue;
        std::string v;
        if (o->count() > 0) {
            const auto r = o->reduced_results();
            if (!r.empty()) v = r.back();
            if (o->get_type_size() == 0 && v.empty()) v = "true";
        } else {
            v = o->get_default_str();
        }
        if (v.empty() && o->get_type_size() != 0) continue;
        if (o->get_type_size() == 0) {
            j[name] = v == "true" || v == "1";
            continue;
        }
        j[name] = v;
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot write " + path);
    f << text;
    if (!f) throw config_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot read " + path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace stablenoise::cli
