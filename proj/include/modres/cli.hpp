#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace modres::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_numeric = 3,
    exit_compare = 4,
};

// Raw key=value text is kept verbatim so a dumped config re-parses identically.
struct RunConfig {
    std::string command;
    std::map<std::string, std::string> values;
    std::optional<std::string> dump_path;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    int integer(const std::string& key) const;
    int integer_or(const std::string& key, int fallback) const;

    bool operator==(const RunConfig& other) const {
        return command == other.command && values == other.values;
    }
};

const std::vector<std::string>& known_commands();
const std::vector<std::string>& known_models();
const std::vector<std::string>& known_keys();

// args excludes the program name
RunConfig parse_args(const std::vector<std::string>& args);
RunConfig parse_config_text(const std::string& text, const std::string& origin);
std::string dump_config(const RunConfig& cfg);

std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace modres::cli
