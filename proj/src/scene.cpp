#include "spherecol/scene.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spherecol {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw ConfigError("scene line " + std::to_string(line) + ": " + msg);
}

double to_double(std::string_view s, std::size_t line) {
    s = trim(s);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) {
        fail(line, "expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

template <class Int>
Int to_int(std::string_view s, std::size_t line) {
    s = trim(s);
    Int v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) fail(line, "expected an integer, got '" + std::string(s) + "'");
    return v;
}

Vec3 to_vec3(std::string_view s, std::size_t line) {
    std::string text(s);
    for (auto& ch : text) {
        if (ch == ',') ch = ' ';
    }
    std::istringstream in(text);
    std::string a, b, c, extra;
    if (!(in >> a >> b >> c) || (in >> extra)) fail(line, "expected three numbers, got '" + std::string(s) + "'");
    return {to_double(a, line), to_double(b, line), to_double(c, line)};
}

bool to_bool(std::string_view s, std::size_t line) {
    s = trim(s);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    fail(line, "expected a boolean, got '" + std::string(s) + "'");
}

struct ObstacleSpec {
    std::string type;
    Vec3 center;
    double radius = 0.0;
    Vec3 normal{0.0, 1.0, 0.0};
    double offset = 0.0;
    std::size_t line = 0;
};

Obstacle finish_obstacle(const ObstacleSpec& o) {
    if (o.type == "sphere") {
        if (!(o.radius > 0.0)) fail(o.line, "sphere obstacle needs a positive radius");
        return SphereObstacle{o.center, o.radius};
    }
    if (o.type == "plane") {
        if (!(norm(o.normal) > 0.0)) fail(o.line, "plane obstacle needs a nonzero normal");
        return PlaneObstacle{normalized(o.normal), o.offset};
    }
    fail(o.line, "obstacle type must be sphere or plane");
}

void set_global(SceneConfig& c, std::string_view key, std::string_view value, std::size_t line) {
    try {
        if (key == "name") c.name = std::string(value);
        else if (key == "dt") c.dt = to_double(value, line);
        else if (key == "frames") c.frames = to_int<int>(value, line);
        else if (key == "iterations") c.iterations = to_int<int>(value, line);
        else if (key == "gravity") c.gravity = to_vec3(value, line);
        else if (key == "damping") c.damping = to_double(value, line);
        else if (key == "method") c.method = parse_method(value);
        else if (key == "cone_mode") c.cone_mode = parse_cone_mode(value);
        else if (key == "update_threshold_d") c.update_threshold_d = to_double(value, line);
        else if (key == "flat_scale") c.flat_scale = to_double(value, line);
        else if (key == "curv_radius_min_frac") c.curv_radius_min_frac = to_double(value, line);
        else if (key == "curv_radius_max_frac") c.curv_radius_max_frac = to_double(value, line);
        else if (key == "k_threshold") {
            if (value == "auto") c.k_threshold.reset();
            else c.k_threshold = to_double(value, line);
        } else if (key == "cone_tolerance_deg") c.cone_tolerance_deg = to_double(value, line);
        else if (key == "seed") c.seed = to_int<std::uint64_t>(value, line);
        else if (key == "self_collision") c.self_collision = to_bool(value, line);
        else fail(line, "unknown scene key '" + std::string(key) + "'");
    } catch (const std::invalid_argument& e) {
        fail(line, e.what());
    }
}

void set_body(BodySpec& b, std::string_view key, std::string_view value, std::size_t line) {
    if (key == "name") b.name = std::string(value);
    else if (key == "generator") b.generator = std::string(value);
    else if (key == "resolution") b.resolution = to_int<int>(value, line);
    else if (key == "size") b.size = to_double(value, line);
    else if (key == "subdivisions") b.subdivisions = to_int<int>(value, line);
    else if (key == "radius") b.radius = to_double(value, line);
    else if (key == "path") b.path = std::string(value);
    else if (key == "mass") b.mass = to_double(value, line);
    else if (key == "stiffness") b.stiffness = to_double(value, line);
    else if (key == "pinned") b.pinned = std::string(value);
    else if (key == "translate") b.translate = to_vec3(value, line);
    else if (key == "velocity") b.velocity = to_vec3(value, line);
    else if (key == "jitter") b.jitter = to_double(value, line);
    else if (key == "self_collision") b.self_collision = to_bool(value, line);
    else if (key == "braced") b.braced = to_bool(value, line);
    else if (key == "facing") {
        if (value == "up") b.facing_up = true;
        else if (value == "down") b.facing_up = false;
        else fail(line, "facing must be up or down");
    } else fail(line, "unknown body key '" + std::string(key) + "'");
}

void set_obstacle(ObstacleSpec& o, std::string_view key, std::string_view value, std::size_t line) {
    if (key == "type") o.type = std::string(value);
    else if (key == "center") o.center = to_vec3(value, line);
    else if (key == "radius") o.radius = to_double(value, line);
    else if (key == "normal") o.normal = to_vec3(value, line);
    else if (key == "offset") o.offset = to_double(value, line);
    else fail(line, "unknown obstacle key '" + std::string(key) + "'");
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fmt(const Vec3& v) { return fmt(v.x) + ", " + fmt(v.y) + ", " + fmt(v.z); }

}  // namespace

void SceneConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (frames < 1) throw ConfigError("frames must be >= 1");
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (!(damping >= 0.0 && damping <= 1.0)) throw ConfigError("damping must lie in [0, 1]");
    if (!(update_threshold_d >= 0.0)) throw ConfigError("update_threshold_d must be >= 0");
    if (!(flat_scale >= 1.0)) throw ConfigError("flat_scale must be >= 1");
    if (!(curv_radius_min_frac > 0.0 && curv_radius_min_frac <= 1.0 && curv_radius_max_frac >= 1.0)) {
        throw ConfigError("need 0 < curv_radius_min_frac <= 1 <= curv_radius_max_frac");
    }
    if (k_threshold && !(*k_threshold > 0.0)) throw ConfigError("k_threshold must be positive");
    if (!(cone_tolerance_deg >= 0.0)) throw ConfigError("cone_tolerance_deg must be >= 0");
    if (bodies.empty()) throw ConfigError("scene has no bodies");
    for (const auto& b : bodies) {
        if (b.generator != "cloth" && b.generator != "icosphere" && b.generator != "mesh") {
            throw ConfigError("unknown generator '" + b.generator + "'");
        }
        if (b.generator == "mesh" && b.path.empty()) throw ConfigError("mesh body '" + b.name + "' needs a path");
        if (!(b.mass > 0.0)) throw ConfigError("body mass must be positive");
        if (!(b.stiffness >= 0.0 && b.stiffness <= 1.0)) throw ConfigError("stiffness must lie in [0, 1]");
        if (!(b.jitter >= 0.0)) throw ConfigError("jitter must be >= 0");
    }
}

SceneConfig parse_scene(std::string_view text) {
    enum class Section { Scene, Body, Obstacle } section = Section::Scene;
    SceneConfig cfg;
    std::vector<ObstacleSpec> obstacles;

    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[scene]") section = Section::Scene;
            else if (line == "[body]") {
                section = Section::Body;
                cfg.bodies.emplace_back();
                cfg.bodies.back().name = "body" + std::to_string(cfg.bodies.size() - 1);
            } else if (line == "[obstacle]") {
                section = Section::Obstacle;
                obstacles.emplace_back();
                obstacles.back().line = line_no;
            } else fail(line_no, "unknown section " + std::string(line));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        switch (section) {
            case Section::Scene: set_global(cfg, key, value, line_no); break;
            case Section::Body: set_body(cfg.bodies.back(), key, value, line_no); break;
            case Section::Obstacle: set_obstacle(obstacles.back(), key, value, line_no); break;
        }
    }
    for (const auto& o : obstacles) cfg.obstacles.push_back(finish_obstacle(o));
    cfg.validate();
    return cfg;
}

SceneConfig load_scene(const std::string& source) {
    constexpr std::string_view prefix = "builtin:";
    if (source.starts_with(prefix)) return builtin_scene(std::string_view(source).substr(prefix.size()));
    std::ifstream in(source);
    if (!in) throw ConfigError("cannot open scene file " + source);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

std::vector<std::string> builtin_scene_names() { return {"cloth-over-sphere", "two-sphere-impact", "sphere-drop-on-plane"}; }

SceneConfig builtin_scene(std::string_view name) {
    SceneConfig c;
    c.name = std::string(name);
    if (name == "cloth-over-sphere") {
        c.frames = 300;
        c.iterations = 10;
        BodySpec cloth;
        cloth.name = "cloth";
        cloth.generator = "cloth";
        cloth.resolution = 20;
        cloth.size = 2.0;
        cloth.pinned = "corners";
        cloth.translate = {0.0, 0.8, 0.0};
        c.bodies.push_back(cloth);
        c.obstacles.push_back(SphereObstacle{{0.0, 0.0, 0.0}, 0.5});
    } else if (name == "two-sphere-impact") {
        c.frames = 100;
        c.gravity = {};
        BodySpec a;
        a.name = "left";
        a.generator = "icosphere";
        a.subdivisions = 4;
        a.radius = 0.5;
        a.translate = {-0.7, 0.0, 0.0};
        a.braced = true;
        a.velocity = {1.5, 0.0, 0.0};
        BodySpec b = a;
        b.name = "right";
        b.translate = {0.7, 0.05, 0.0};
        b.velocity = {-1.5, 0.0, 0.0};
        c.bodies = {a, b};
    } else if (name == "sphere-drop-on-plane") {
        c.frames = 200;
        BodySpec ball;
        ball.name = "ball";
        ball.generator = "icosphere";
        ball.subdivisions = 3;
        ball.radius = 0.3;
        ball.braced = true;
        ball.translate = {0.0, 0.8, 0.0};
        c.bodies.push_back(ball);
        c.obstacles.push_back(PlaneObstacle{{0.0, 1.0, 0.0}, 0.0});
    } else {
        throw ConfigError("unknown builtin scene '" + std::string(name) + "'");
    }
    c.validate();
    return c;
}

std::string format_scene(const SceneConfig& c) {
    std::ostringstream out;
    out << "name = " << c.name << '\n'
        << "dt = " << fmt(c.dt) << '\n'
        << "frames = " << c.frames << '\n'
        << "iterations = " << c.iterations << '\n'
        << "gravity = " << fmt(c.gravity) << '\n'
        << "damping = " << fmt(c.damping) << '\n'
        << "method = " << to_string(c.method) << '\n'
        << "cone_mode = " << to_string(c.cone_mode) << '\n'
        << "update_threshold_d = " << fmt(c.update_threshold_d) << '\n'
        << "flat_scale = " << fmt(c.flat_scale) << '\n'
        << "curv_radius_min_frac = " << fmt(c.curv_radius_min_frac) << '\n'
        << "curv_radius_max_frac = " << fmt(c.curv_radius_max_frac) << '\n'
        << "k_threshold = " << (c.k_threshold ? fmt(*c.k_threshold) : std::string("auto")) << '\n'
        << "cone_tolerance_deg = " << fmt(c.cone_tolerance_deg) << '\n'
        << "seed = " << c.seed << '\n'
        << "self_collision = " << (c.self_collision ? "true" : "false") << '\n';
    for (const auto& b : c.bodies) {
        out << "\n[body]\n"
            << "name = " << b.name << '\n'
            << "generator = " << b.generator << '\n';
        if (b.generator == "cloth") {
            out << "resolution = " << b.resolution << '\n'
                << "size = " << fmt(b.size) << '\n'
                << "facing = " << (b.facing_up ? "up" : "down") << '\n';
        } else if (b.generator == "icosphere") {
            out << "subdivisions = " << b.subdivisions << '\n' << "radius = " << fmt(b.radius) << '\n';
        } else {
            out << "path = " << b.path << '\n';
        }
        out << "mass = " << fmt(b.mass) << '\n'
            << "stiffness = " << fmt(b.stiffness) << '\n'
            << "pinned = " << b.pinned << '\n'
            << "translate = " << fmt(b.translate) << '\n'
            << "velocity = " << fmt(b.velocity) << '\n'
            << "jitter = " << fmt(b.jitter) << '\n'
            << "braced = " << (b.braced ? "true" : "false") << '\n';
        if (b.self_collision) out << "self_collision = " << (*b.self_collision ? "true" : "false") << '\n';
    }
    for (const auto& o : c.obstacles) {
        out << "\n[obstacle]\n";
        if (const auto* s = std::get_if<SphereObstacle>(&o)) {
            out << "type = sphere\ncenter = " << fmt(s->center) << "\nradius = " << fmt(s->radius) << '\n';
        } else {
            const auto& p = std::get<PlaneObstacle>(o);
            out << "type = plane\nnormal = " << fmt(p.normal) << "\noffset = " << fmt(p.offset) << '\n';
        }
    }
    return out.str();
}

}  // namespace spherecol
