#include "sonine/errors.hpp"

namespace sonine {

namespace {
std::string anchor(const std::string& file, int line, const std::string& msg) {
    if (line > 0) return file + ":" + std::to_string(line) + ": " + msg;
    return file + ": " + msg;
}
}  // namespace

ConfigError::ConfigError(const std::string& file, int line, const std::string& msg)
    : std::runtime_error(anchor(file, line, msg)), line_(line) {}

}  // namespace sonine
