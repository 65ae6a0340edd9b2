#include <benchmark/benchmark.h>

#include "fluor/colorimetry.hpp"
#include "fluor/materials.hpp"
#include "fluor/scene.hpp"
#include "fluor/transport.hpp"

using namespace fluor;

namespace {

const WavelengthGrid& grid() {
    static const auto g = WavelengthGrid::canonical();
    return g;
}

const char* basis_name(std::int64_t i) {
    static const char* names[] = {"xyz", "xyzu", "seven"};
    return names[i];
}

void BM_reduce_ours(benchmark::State& state) {
    const BasisSet basis = make_basis(basis_name(state.range(0)), grid());
    const auto m = find_material("syn-herpioye", grid());
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce_ours(m.p, basis));
    }
    state.SetLabel(basis.name());
}
BENCHMARK(BM_reduce_ours)->DenseRange(0, 2);

void BM_reduce_naive(benchmark::State& state) {
    const BasisSet basis = make_basis("xyz", grid());
    const auto m = find_material("syn-herpioye", grid());
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduce_naive(m.p, basis));
    }
}
BENCHMARK(BM_reduce_naive);

void BM_patch_spectral(benchmark::State& state) {
    const BasisSet xyz = make_basis("xyz", grid());
    const auto m = find_material("syn-uvyellow", grid());
    const Spectrum light = load_illuminant("D65", grid()).spectrum;
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_patch_spectral({m, light}, xyz));
    }
}
BENCHMARK(BM_patch_spectral);

void BM_ciede2000(benchmark::State& state) {
    const Eigen::Vector3d a(50.0, 2.6772, -79.7751), b(50.0, 0.0, -82.7485);
    for (auto _ : state) {
        benchmark::DoNotOptimize(delta_e_2000_lab(a, b));
    }
}
BENCHMARK(BM_ciede2000);

void probe(benchmark::State& state, bool adjoint) {
    ProbeScene scene = default_probe_scene();
    scene.camera.width = scene.camera.height = static_cast<int>(state.range(1));
    const SceneAssets assets = load_scene_assets(scene, grid());
    const BasisSet basis = make_basis(basis_name(state.range(0)), grid());
    RenderOptions o;
    o.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjoint ? adjoint_trace(scene, assets, basis, o) : light_trace(scene, assets, basis, o));
    }
    state.SetItemsProcessed(state.iterations() * scene.camera.width * scene.camera.height);
    state.SetLabel(basis.name());
}

void BM_light_trace(benchmark::State& state) { probe(state, false); }
void BM_adjoint_trace(benchmark::State& state) { probe(state, true); }
BENCHMARK(BM_light_trace)->ArgsProduct({{0, 1, 2}, {32}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_adjoint_trace)->ArgsProduct({{0, 1, 2}, {32}})->Unit(benchmark::kMillisecond);

void BM_render_spectral(benchmark::State& state) {
    ProbeScene scene = default_probe_scene();
    scene.camera.width = scene.camera.height = 32;
    const SceneAssets assets = load_scene_assets(scene, grid());
    const BasisSet xyz = make_basis("xyz", grid());
    RenderOptions o;
    o.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_probe_spectral(scene, assets, xyz, o));
    }
}
BENCHMARK(BM_render_spectral)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
