#include "fluor/scene.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "fluor/colorimetry.hpp"
#include "fluor/error.hpp"
#include "fluor/text_io.hpp"

namespace fluor {

namespace {

constexpr int kEmitter = -1;

std::vector<double> parse_numbers(const std::vector<std::string>& fields, std::size_t first,
                                  std::size_t count, const std::string& where) {
    std::vector<double> out;
    for (std::size_t i = first; i < first + count; ++i) {
        const auto v = text_io::parse_double(fields[i]);
        if (!v) {
            throw ValidationError(fmt::format("{}: '{}' is not a number", where, fields[i]));
        }
        out.push_back(*v);
    }
    return out;
}

int parse_positive_int(const std::string& field, const std::string& where) {
    const auto v = text_io::parse_double(field);
    if (!v || *v < 1.0 || *v != std::floor(*v)) {
        throw ValidationError(fmt::format("{}: expected a positive integer, got '{}'", where, field));
    }
    return static_cast<int>(*v);
}

std::string fmt_vec(const Eigen::Vector3d& v) {
    return fmt::format("{} {} {}", text_io::format_double(v.x()), text_io::format_double(v.y()),
                       text_io::format_double(v.z()));
}

struct Element {
    std::array<Eigen::Vector3d, 4> corners;
    Eigen::Vector3d center;
    Eigen::Vector3d normal;
    int quad = 0;
    int material = kEmitter;
};

// Form factor from a differential area at x (normal n) to a polygon, by
// Lambert's contour integral. Exact for an unoccluded polygon lying wholly in
// front of x; the element's front side has to face x.
double point_form_factor(const Eigen::Vector3d& x, const Eigen::Vector3d& n, const Element& e) {
    const Eigen::Vector3d to_x = x - e.center;
    if (e.normal.dot(to_x) <= 1e-12 || n.dot(-to_x) <= 1e-12) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const Eigen::Vector3d a = e.corners[i] - x;
        const Eigen::Vector3d b = e.corners[(i + 1) % 4] - x;
        const Eigen::Vector3d c = a.cross(b);
        const double cn = c.norm();
        if (cn < 1e-300) {
            continue;
        }
        const double gamma = std::atan2(cn, a.dot(b));
        sum += gamma * n.dot(c) / cn;
    }
    return std::max(0.0, -sum / (2.0 * std::numbers::pi));
}

struct Geometry {
    std::vector<Element> elements;
    std::vector<std::string> materials;  // index -> name
    Eigen::MatrixXd f;                   // centre of i -> element j
    Eigen::VectorXd sky;                 // sky fraction seen from each centre
    bool has_sky = false;

    Eigen::Index size() const { return static_cast<Eigen::Index>(elements.size()); }
};

Geometry prepare(const ProbeScene& scene) {
    if (scene.quads.empty()) {
        throw ValidationError("scene has no quads");
    }
    if (scene.bounces < 1) {
        throw ValidationError("bounces must be at least 1");
    }
    Geometry g;
    g.has_sky = !scene.sky.empty();
    for (const auto& q : scene.quads) {
        if (!q.is_emitter() &&
            std::find(g.materials.begin(), g.materials.end(), q.material) == g.materials.end()) {
            g.materials.push_back(q.material);
        }
    }
    std::sort(g.materials.begin(), g.materials.end());
    for (std::size_t qi = 0; qi < scene.quads.size(); ++qi) {
        const Quad& q = scene.quads[qi];
        if (q.u.cross(q.v).norm() <= 0.0) {
            throw ValidationError(fmt::format("quad {} is degenerate", qi));
        }
        const int material =
            q.is_emitter()
                ? kEmitter
                : static_cast<int>(std::lower_bound(g.materials.begin(), g.materials.end(),
                                                    q.material) -
                                   g.materials.begin());
        const int s = q.subdivisions;
        const Eigen::Vector3d du = q.u / s;
        const Eigen::Vector3d dv = q.v / s;
        for (int a = 0; a < s; ++a) {
            for (int b = 0; b < s; ++b) {
                Element e;
                const Eigen::Vector3d o = q.origin + a * du + b * dv;
                e.corners = {o, o + du, o + du + dv, o + dv};
                e.center = o + 0.5 * (du + dv);
                e.normal = q.normal();
                e.quad = static_cast<int>(qi);
                e.material = material;
                g.elements.push_back(e);
            }
        }
    }
    const Eigen::Index n = g.size();
    g.f = Eigen::MatrixXd::Zero(n, n);
    g.sky = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Element& ei = g.elements[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            const Element& ej = g.elements[static_cast<std::size_t>(j)];
            if (ei.quad != ej.quad) {
                g.f(i, j) = point_form_factor(ei.center, ei.normal, ej);
            }
        }
        if (g.has_sky) {
            g.sky[i] = std::max(0.0, 1.0 - g.f.row(i).sum());
        }
    }
    return g;
}

enum class HitKind { miss, back, emitter, surface };

struct Sample {
    HitKind kind = HitKind::miss;
    int material = kEmitter;
    Eigen::VectorXd f;  // form factors from the hit point to every element
    double sky = 0.0;
};

struct CameraFrame {
    Eigen::Vector3d eye, forward, right, up;
    double tan_half = 0.0;
    double aspect = 1.0;
};

CameraFrame camera_frame(const Camera& c) {
    if (c.width < 1 || c.height < 1 || !(c.fov_degrees > 0.0 && c.fov_degrees < 180.0)) {
        throw ValidationError("invalid camera");
    }
    CameraFrame f;
    f.eye = c.eye;
    f.forward = (c.target - c.eye).normalized();
    Eigen::Vector3d world_up(0.0, 1.0, 0.0);
    if (std::abs(f.forward.dot(world_up)) > 0.999) {
        world_up = Eigen::Vector3d(0.0, 0.0, -1.0);
    }
    f.right = f.forward.cross(world_up).normalized();
    f.up = f.right.cross(f.forward);
    f.tan_half = std::tan(c.fov_degrees * std::numbers::pi / 360.0);
    f.aspect = static_cast<double>(c.width) / static_cast<double>(c.height);
    return f;
}

// Nearest quad along the ray; returns the hit point through `x`.
int intersect(const ProbeScene& scene, const Eigen::Vector3d& o, const Eigen::Vector3d& d,
              Eigen::Vector3d& x, bool& front) {
    int best = -1;
    double best_t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scene.quads.size(); ++i) {
        const Quad& q = scene.quads[i];
        const Eigen::Vector3d n = q.u.cross(q.v);
        const double denom = n.dot(d);
        if (std::abs(denom) < 1e-300) {
            continue;
        }
        const double t = n.dot(q.origin - o) / denom;
        if (!(t > 1e-9) || t >= best_t) {
            continue;
        }
        const Eigen::Vector3d p = o + t * d - q.origin;
        const double uu = q.u.dot(q.u), uv = q.u.dot(q.v), vv = q.v.dot(q.v);
        const double pu = p.dot(q.u), pv = p.dot(q.v);
        const double det = uu * vv - uv * uv;
        const double a = (pu * vv - pv * uv) / det;
        const double b = (pv * uu - pu * uv) / det;
        if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0) {
            continue;
        }
        best = static_cast<int>(i);
        best_t = t;
        x = o + t * d;
        front = denom < 0.0;
    }
    return best;
}

Sample shade_point(const ProbeScene& scene, const Geometry& g, const Eigen::Vector3d& o,
                   const Eigen::Vector3d& d) {
    Sample s;
    Eigen::Vector3d x;
    bool front = false;
    const int qi = intersect(scene, o, d, x, front);
    if (qi < 0) {
        return s;
    }
    const Quad& q = scene.quads[static_cast<std::size_t>(qi)];
    if (!front) {
        s.kind = HitKind::back;
        return s;
    }
    if (q.is_emitter()) {
        s.kind = HitKind::emitter;
        return s;
    }
    s.kind = HitKind::surface;
    s.material = static_cast<int>(
        std::lower_bound(g.materials.begin(), g.materials.end(), q.material) - g.materials.begin());
    const Eigen::Vector3d n = q.normal();
    s.f = Eigen::VectorXd::Zero(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) {
        const Element& e = g.elements[static_cast<std::size_t>(j)];
        if (e.quad != qi) {
            s.f[j] = point_form_factor(x, n, e);
        }
    }
    if (g.has_sky) {
        s.sky = std::max(0.0, 1.0 - s.f.sum());
    }
    return s;
}

// Runs `shade` on every camera sample. Each pixel draws its jitter from its
// own generator seeded by (seed, pixel index), so results do not depend on
// the thread count or scheduling.
template <typename Shade>
Image render_pixels(const ProbeScene& scene, const Geometry& g, int channels,
                    const RenderOptions& options, const Shade& shade) {
    const Camera& cam = scene.camera;
    const CameraFrame frame = camera_frame(cam);
    if (scene.samples_per_pixel < 1) {
        throw ValidationError("samples per pixel must be at least 1");
    }
    Image image(cam.width, cam.height, channels);
    std::atomic<int> next_row{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (int y = next_row++; y < cam.height; y = next_row++) {
                for (int x = 0; x < cam.width; ++x) {
                    const auto pixel = static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(cam.width) +
                                       static_cast<std::uint64_t>(x);
                    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                                      static_cast<std::uint32_t>(options.seed >> 32),
                                      static_cast<std::uint32_t>(pixel),
                                      static_cast<std::uint32_t>(pixel >> 32)};
                    std::mt19937_64 rng(seq);
                    std::uniform_real_distribution<double> jitter(0.0, 1.0);
                    Eigen::VectorXd acc = Eigen::VectorXd::Zero(channels);
                    for (int k = 0; k < scene.samples_per_pixel; ++k) {
                        double sx = 0.5, sy = 0.5;
                        if (scene.samples_per_pixel > 1) {
                            sx = jitter(rng);
                            sy = jitter(rng);
                        }
                        const double px = (2.0 * (x + sx) / cam.width - 1.0) * frame.tan_half * frame.aspect;
                        const double py = (1.0 - 2.0 * (y + sy) / cam.height) * frame.tan_half;
                        const Eigen::Vector3d dir =
                            (frame.forward + px * frame.right + py * frame.up).normalized();
                        acc += shade(shade_point(scene, g, frame.eye, dir));
                    }
                    image.set_pixel(x, y, acc / scene.samples_per_pixel);
                }
            }
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next_row = cam.height;
        }
    };

    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp(threads, 1u, static_cast<unsigned>(cam.height));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return image;
}

// Light transport with per-material operators on D-dimensional radiance:
// `transport[m]` (D x D) per bounce, `gather[m]` (C x D) at the visible
// surface, `view` (C x D) for radiance seen directly.
struct Operators {
    std::vector<Eigen::MatrixXd> transport;
    std::vector<Eigen::MatrixXd> gather;
    Eigen::MatrixXd view;
    Eigen::VectorXd light;
    Eigen::VectorXd sky;
};

Image forward(const ProbeScene& scene, const Geometry& g, const Operators& ops,
              const RenderOptions& options) {
    const Eigen::Index n = g.size();
    const Eigen::Index d = ops.light.size();
    Eigen::MatrixXd emitted = Eigen::MatrixXd::Zero(d, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (g.elements[static_cast<std::size_t>(j)].material == kEmitter) {
            emitted.col(j) = ops.light;
        }
    }
    const Eigen::MatrixXd ft = g.f.transpose();
    auto bounce = [&](const Eigen::MatrixXd& incident) {
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const int m = g.elements[static_cast<std::size_t>(j)].material;
            if (m != kEmitter) {
                out.col(j).noalias() = ops.transport[static_cast<std::size_t>(m)] * incident.col(j);
            }
        }
        return out;
    };
    Eigen::MatrixXd source = emitted;
    Eigen::MatrixXd radiance;
    if (scene.bounces >= 2) {
        radiance = bounce(emitted * ft + ops.sky * g.sky.transpose());
        source += radiance;
    }
    for (int b = 2; b < scene.bounces; ++b) {
        radiance = bounce(radiance * ft);
        source += radiance;
    }
    const Eigen::VectorXd view_light = ops.view * ops.light;
    const Eigen::VectorXd view_sky = ops.view * ops.sky;
    const auto channels = static_cast<int>(ops.view.rows());
    return render_pixels(scene, g, channels, options, [&](const Sample& s) -> Eigen::VectorXd {
        switch (s.kind) {
            case HitKind::surface:
                return ops.gather[static_cast<std::size_t>(s.material)] * (source * s.f + ops.sky * s.sky);
            case HitKind::emitter:
                return view_light;
            case HitKind::miss:
                if (g.has_sky) {
                    return view_sky;
                }
                [[fallthrough]];
            default:
                return Eigen::VectorXd::Zero(channels);
        }
    });
}

std::vector<ReducedMatrix> reduced_materials(const Geometry& g, const SceneAssets& assets,
                                             const BasisSet& basis, const RenderOptions& options) {
    std::vector<ReducedMatrix> out;
    for (const auto& name : g.materials) {
        const auto it = assets.materials.find(name);
        if (it == assets.materials.end()) {
            throw ValidationError("scene material '" + name + "' was not loaded");
        }
        out.push_back(reduce(it->second.p, basis, options.method, options.norm));
    }
    return out;
}

Eigen::VectorXd sky_coefficients(const SceneAssets& assets, const BasisSet& basis) {
    return assets.sky ? downsample(*assets.sky, basis).c : Eigen::VectorXd::Zero(basis.size());
}

}  // namespace

ProbeScene parse_scene(const std::string& text, const std::string& source) {
    ProbeScene scene;
    scene.quads.clear();
    bool seen_camera = false;
    int line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream words(line);
        std::vector<std::string> f;
        for (std::string w; words >> w;) {
            f.push_back(w);
        }
        if (f.empty()) {
            continue;
        }
        const std::string where = fmt::format("{}:{}", source, line_no);
        const std::string& key = f[0];
        if (key == "emitter" || key == "sky") {
            if (f.size() != 2) {
                throw ValidationError(where + ": expected '" + key + " <illuminant>'");
            }
            (key == "emitter" ? scene.emitter : scene.sky) = f[1];
        } else if (key == "quad") {
            if (f.size() != 11 && f.size() != 12) {
                throw ValidationError(where + ": expected 'quad ox oy oz ux uy uz vx vy vz <material> [subdivisions]'");
            }
            const auto v = parse_numbers(f, 1, 9, where);
            Quad q;
            q.origin = {v[0], v[1], v[2]};
            q.u = {v[3], v[4], v[5]};
            q.v = {v[6], v[7], v[8]};
            q.material = f[10];
            if (f.size() == 12) {
                q.subdivisions = parse_positive_int(f[11], where);
            }
            if (q.u.cross(q.v).norm() <= 0.0) {
                throw ValidationError(where + ": quad edges are parallel");
            }
            scene.quads.push_back(q);
        } else if (key == "camera") {
            if (f.size() != 8 && f.size() != 10) {
                throw ValidationError(where + ": expected 'camera ex ey ez tx ty tz fov [width height]'");
            }
            const auto v = parse_numbers(f, 1, 7, where);
            scene.camera.eye = {v[0], v[1], v[2]};
            scene.camera.target = {v[3], v[4], v[5]};
            scene.camera.fov_degrees = v[6];
            if (f.size() == 10) {
                scene.camera.width = parse_positive_int(f[8], where);
                scene.camera.height = parse_positive_int(f[9], where);
            }
            seen_camera = true;
        } else if (key == "bounces" || key == "spp") {
            if (f.size() != 2) {
                throw ValidationError(where + ": expected '" + key + " <n>'");
            }
            (key == "bounces" ? scene.bounces : scene.samples_per_pixel) = parse_positive_int(f[1], where);
        } else {
            throw ValidationError(where + ": unknown directive '" + key + "'");
        }
    }
    if (scene.quads.empty()) {
        throw ValidationError(source + ": scene has no quads");
    }
    if (!seen_camera) {
        throw ValidationError(source + ": scene has no camera");
    }
    return scene;
}

ProbeScene read_scene(const std::filesystem::path& path) {
    return parse_scene(text_io::read_file(path), path.string());
}

std::string scene_to_text(const ProbeScene& scene) {
    std::string out;
    out += "emitter " + scene.emitter + "\n";
    if (!scene.sky.empty()) {
        out += "sky " + scene.sky + "\n";
    }
    for (const auto& q : scene.quads) {
        out += fmt::format("quad {} {} {} {} {}\n", fmt_vec(q.origin), fmt_vec(q.u), fmt_vec(q.v),
                           q.material, q.subdivisions);
    }
    const Camera& c = scene.camera;
    out += fmt::format("camera {} {} {} {} {}\n", fmt_vec(c.eye), fmt_vec(c.target),
                       text_io::format_double(c.fov_degrees), c.width, c.height);
    out += fmt::format("bounces {}\nspp {}\n", scene.bounces, scene.samples_per_pixel);
    return out;
}

ProbeScene default_probe_scene(const std::string& floor, const std::string& back) {
    using V = Eigen::Vector3d;
    ProbeScene s;
    s.emitter = "D65";
    s.quads = {
        {V(0, 0, 1), V(1, 0, 0), V(0, 0, -1), floor, 4},
        {V(0, 0, 0), V(1, 0, 0), V(0, 1, 0), back, 4},
        {V(0, 0, 1), V(0, 0, -1), V(0, 1, 0), "white", 4},
        {V(1, 0, 0), V(0, 0, 1), V(0, 1, 0), "white", 4},
        {V(0, 1, 0), V(1, 0, 0), V(0, 0, 1), "emitter", 4},
    };
    s.camera = Camera{};
    s.bounces = 3;
    return s;
}

ProbeScene patch_probe_scene(const std::string& material, const std::string& sky) {
    using V = Eigen::Vector3d;
    ProbeScene s;
    s.sky = sky;
    s.quads = {{V(-4, 0, 4), V(8, 0, 0), V(0, 0, -8), material, 1}};
    s.camera.eye = V(0, 1, 1);
    s.camera.target = V(0, 0, 0);
    s.camera.fov_degrees = 30.0;
    s.camera.width = 8;
    s.camera.height = 8;
    s.bounces = 1;
    return s;
}

SceneAssets load_scene_assets(const ProbeScene& scene, const WavelengthGrid& grid) {
    SceneAssets assets{load_illuminant(scene.emitter, grid).spectrum, std::nullopt, {}};
    if (!scene.sky.empty()) {
        assets.sky = load_illuminant(scene.sky, grid).spectrum;
    }
    for (const auto& q : scene.quads) {
        if (!q.is_emitter() && !assets.materials.contains(q.material)) {
            assets.materials.emplace(q.material, find_material(q.material, grid));
        }
    }
    return assets;
}

Image light_trace(const ProbeScene& scene, const SceneAssets& assets, const BasisSet& basis,
                  const RenderOptions& options) {
    const Geometry g = prepare(scene);
    Operators ops;
    for (const auto& r : reduced_materials(g, assets, basis, options)) {
        ops.transport.push_back(r.matrix());
        ops.gather.push_back(r.matrix());
    }
    ops.view = Eigen::MatrixXd::Identity(basis.size(), basis.size());
    ops.light = downsample(assets.emitter, basis).c;
    ops.sky = sky_coefficients(assets, basis);
    return forward(scene, g, ops, options);
}

Image lambertian_trace(const ProbeScene& scene, const SceneAssets& assets, const BasisSet& basis,
                       const std::map<std::string, Eigen::VectorXd>& albedo,
                       const RenderOptions& options) {
    const Geometry g = prepare(scene);
    Operators ops;
    for (const auto& name : g.materials) {
        const auto it = albedo.find(name);
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(basis.size(), basis.size());
        if (it != albedo.end()) {
            if (it->second.size() != basis.size()) {
                throw ValidationError("albedo for '" + name + "' does not match the basis size");
            }
            a = it->second.asDiagonal();
        }
        ops.transport.push_back(a);
        ops.gather.push_back(a);
    }
    ops.view = Eigen::MatrixXd::Identity(basis.size(), basis.size());
    ops.light = downsample(assets.emitter, basis).c;
    ops.sky = sky_coefficients(assets, basis);
    return forward(scene, g, ops, options);
}

Image render_probe_spectral(const ProbeScene& scene, const SceneAssets& assets,
                            const BasisSet& xyz, const RenderOptions& options) {
    if (xyz.size() != 3) {
        throw ValidationError("the spectral reference projects with a 3-function XYZ basis");
    }
    const Geometry g = prepare(scene);
    Operators ops;
    ops.view = xyz.downsampling().transpose();
    for (const auto& name : g.materials) {
        const DonaldsonMatrix& p = assets.materials.at(name).p;
        if (!(p.grid_in() == xyz.grid()) || !(p.grid_out() == xyz.grid())) {
            throw ValidationError("material '" + name + "' is not sampled on the basis grid");
        }
        ops.transport.push_back(p.entries());
        ops.gather.push_back(ops.view * p.entries());
    }
    ops.light = resample(assets.emitter, xyz.grid()).values();
    ops.sky = assets.sky ? resample(*assets.sky, xyz.grid()).values()
                         : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(xyz.grid().size()));
    return forward(scene, g, ops, options);
}

Image adjoint_trace(const ProbeScene& scene, const SceneAssets& assets, const BasisSet& basis,
                    const RenderOptions& options) {
    const Geometry g = prepare(scene);
    const auto reduced = reduced_materials(g, assets, basis, options);
    const Eigen::Index n = g.size();
    const Eigen::Index k = basis.size();
    const Eigen::VectorXd light = downsample(assets.emitter, basis).c;
    const Eigen::VectorXd sky = sky_coefficients(assets, basis);

    // Light reaching each element's centre directly (next-event estimate).
    Eigen::MatrixXd direct = sky * g.sky.transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (g.elements[static_cast<std::size_t>(j)].material == kEmitter) {
            direct += light * g.f.col(j).transpose();
        }
    }
    auto material_of = [&](Eigen::Index j) { return g.elements[static_cast<std::size_t>(j)].material; };

    return render_pixels(scene, g, static_cast<int>(k), options, [&](const Sample& s) -> Eigen::VectorXd {
        switch (s.kind) {
            case HitKind::emitter:
                return light;
            case HitKind::miss:
                return g.has_sky ? sky : Eigen::VectorXd::Zero(k);
            case HitKind::back:
                return Eigen::VectorXd::Zero(k);
            case HitKind::surface:
                break;
        }
        // Throughput after the visible vertex.
        const Eigen::MatrixXd m = reduced[static_cast<std::size_t>(s.material)].matrix();
        double to_emitters = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (material_of(j) == kEmitter) {
                to_emitters += s.f[j];
            }
        }
        Eigen::VectorXd out = m * light * to_emitters + m * sky * s.sky;
        if (scene.bounces < 2) {
            return out;
        }
        std::vector<Eigen::MatrixXd> throughput(static_cast<std::size_t>(n));
        for (Eigen::Index j = 0; j < n; ++j) {
            const int mj = material_of(j);
            if (mj != kEmitter && s.f[j] > 0.0) {
                throughput[static_cast<std::size_t>(j)] =
                    s.f[j] * m * reduced[static_cast<std::size_t>(mj)].matrix();
                out.noalias() += throughput[static_cast<std::size_t>(j)] * direct.col(j);
            }
        }
        for (int depth = 3; depth <= scene.bounces; ++depth) {
            std::vector<Eigen::MatrixXd> next(static_cast<std::size_t>(n));
            for (Eigen::Index j = 0; j < n; ++j) {
                const int mj = material_of(j);
                if (mj == kEmitter) {
                    continue;
                }
                Eigen::MatrixXd arriving = Eigen::MatrixXd::Zero(k, k);
                bool any = false;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const auto& t = throughput[static_cast<std::size_t>(i)];
                    if (t.size() != 0 && g.f(i, j) > 0.0) {
                        arriving.noalias() += g.f(i, j) * t;
                        any = true;
                    }
                }
                if (any) {
                    next[static_cast<std::size_t>(j)] =
                        arriving * reduced[static_cast<std::size_t>(mj)].matrix();
                    out.noalias() += next[static_cast<std::size_t>(j)] * direct.col(j);
                }
            }
            throughput = std::move(next);
        }
        return out;
    });
}

std::vector<std::string> pixel_regions(const ProbeScene& scene) {
    const CameraFrame frame = camera_frame(scene.camera);
    const Camera& cam = scene.camera;
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(cam.width) * static_cast<std::size_t>(cam.height));
    for (int y = 0; y < cam.height; ++y) {
        for (int x = 0; x < cam.width; ++x) {
            const double px = (2.0 * (x + 0.5) / cam.width - 1.0) * frame.tan_half * frame.aspect;
            const double py = (1.0 - 2.0 * (y + 0.5) / cam.height) * frame.tan_half;
            const Eigen::Vector3d dir = (frame.forward + px * frame.right + py * frame.up).normalized();
            Eigen::Vector3d hit;
            bool front = false;
            const int qi = intersect(scene, frame.eye, dir, hit, front);
            if (qi < 0) {
                labels.emplace_back(scene.sky.empty() ? "background" : "sky");
            } else if (!front) {
                labels.emplace_back("background");
            } else {
                labels.push_back(scene.quads[static_cast<std::size_t>(qi)].material);
            }
        }
    }
    return labels;
}

}  // namespace fluor
