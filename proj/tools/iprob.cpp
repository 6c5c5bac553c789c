// iprob: command-line driver for the tiling / q-process / polymer toolkit.
//
// Every run writes a JSON envelope {command, params, seed, values...,
// error_estimate, n_samples}; outputs are byte-identical for a fixed master
// seed (wall_time is emitted only with --timing). Exit codes: 0 ok,
// 1 runtime error, 2 usage/validation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "iprob/asymptotics.hpp"
#include "iprob/dynamics.hpp"
#include "iprob/observables.hpp"
#include "iprob/polymer.hpp"
#include "iprob/rng.hpp"
#include "iprob/stats.hpp"
#include "iprob/symfun.hpp"
#include "iprob/tilings.hpp"
#include "iprob/validate.hpp"

using nlohmann::json;
using namespace iprob;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "json";
  int threads = 1;
  bool timing = false;
};

std::string resolve_path(const std::string& path) {
  if (const char* dir = std::getenv("OUTPUT_DIR"); dir && !path.empty() && path.front() != '/')
    return std::string(dir) + "/" + path;
  return path;
}

std::string output_path(const GlobalOpts& g, const std::string& fallback) {
  const std::string path = g.out.empty() ? fallback : g.out;
  return resolve_path(path);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << text;
}

int emit(const GlobalOpts& g, json envelope, double wall_seconds) {
  if (g.timing) envelope["wall_time_s"] = wall_seconds;
  write_text(output_path(g, ""), envelope.dump(2) + "\n");
  return 0;
}

json params_json(std::initializer_list<std::pair<std::string, json>> kv) {
  json p = json::object();
  for (auto& [k, v] : kv) p[k] = v;
  return p;
}

std::vector<int> parse_levels(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integrable-probability simulation and verification toolkit"};
  app.fallthrough(true);
  GlobalOpts g;
  app.add_option("--seed", g.seed, "master seed (64-bit)");
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--format", g.format, "json|csv|svg (command dependent)");
  app.add_option("--threads", g.threads, "worker threads for replica-level parallelism");
  app.add_flag("--timing", g.timing, "include wall_time_s in the envelope");
  std::string config_file;
  app.add_option("--config", config_file, "JSON config file; explicit flags override it");

  // ---- token injection from the config file (flags override) ----
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      std::ifstream f(args[i + 1]);
      if (!f) {
        std::cerr << json{{"error", "cannot read config file"}, {"path", args[i + 1]}}.dump() << "\n";
        return 2;
      }
      json cfg = json::parse(f, nullptr, false);
      if (cfg.is_discarded() || !cfg.is_object()) {
        std::cerr << json{{"error", "config must be a JSON object"}}.dump() << "\n";
        return 2;
      }
      for (auto& [k, v] : cfg.items()) {
        const std::string flag = "--" + k;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        args.push_back(flag);
        if (!v.is_boolean()) args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
  }

  int exit_code = 0;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  // ------------------------------------------------------------- tilings
  auto* tl = app.add_subcommand("tilings", "hexagon lozenge tilings");
  {
    auto* sample = tl->add_subcommand("sample", "exact uniform sample");
    auto a = std::make_shared<std::int64_t>(2), b = std::make_shared<std::int64_t>(2),
         c = std::make_shared<std::int64_t>(2);
    auto svg = std::make_shared<std::string>();
    sample->add_option("--a", *a)->required();
    sample->add_option("--b", *b)->required();
    sample->add_option("--c", *c)->required();
    sample->add_option("--svg", *svg, "also write an SVG rendering here");
    sample->callback([=, &g, &elapsed] {
      Rng rng(g.seed);
      const auto t = tilings::sample_tiling(HexagonSpec(*a, *b, *c), rng);
      if (!svg->empty()) write_text(resolve_path(*svg), tilings::render_svg(t));
      json env{{"command", "tilings sample"},
               {"params", params_json({{"a", *a}, {"b", *b}, {"c", *c}})},
               {"seed", g.seed},
               {"tiling", json::parse(tilings::tiling_to_json(t))},
               {"error_estimate", 0.0},
               {"n_samples", 1}};
      emit(g, env, elapsed());
    });

    auto* enumerate = tl->add_subcommand("enumerate", "exact count");
    auto ea = std::make_shared<std::int64_t>(2), eb = std::make_shared<std::int64_t>(2),
         ec = std::make_shared<std::int64_t>(2);
    enumerate->add_option("--a", *ea)->required();
    enumerate->add_option("--b", *eb)->required();
    enumerate->add_option("--c", *ec)->required();
    enumerate->callback([=, &g, &elapsed] {
      const auto count = tilings::count_tilings(HexagonSpec(*ea, *eb, *ec));
      json env{{"command", "tilings enumerate"},
               {"params", params_json({{"a", *ea}, {"b", *eb}, {"c", *ec}})},
               {"seed", g.seed},
               {"count", count.get_str()},
               {"error_estimate", 0.0},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* render = tl->add_subcommand("render", "SVG from a stored tiling");
    auto ra = std::make_shared<std::int64_t>(2), rb = std::make_shared<std::int64_t>(2),
         rc = std::make_shared<std::int64_t>(2);
    auto in = std::make_shared<std::string>();
    render->add_option("--a", *ra)->required();
    render->add_option("--b", *rb)->required();
    render->add_option("--c", *rc)->required();
    render->add_option("--in", *in, "tiling JSON (array of rows)")->required();
    render->callback([=, &g] {
      std::ifstream f(*in);
      if (!f) throw std::runtime_error("cannot read tiling file: " + *in);
      std::stringstream buf;
      buf << f.rdbuf();
      const auto t = tilings::tiling_from_json(HexagonSpec(*ra, *rb, *rc), buf.str());
      write_text(output_path(g, "tiling.svg"), tilings::render_svg(t));
    });
  }

  // ------------------------------------------------------------- dynamics
  auto* dy = app.add_subcommand("dynamics", "interlacing-array Markov dynamics");
  {
    auto* run = dy->add_subcommand("run", "evolve the packed array");
    auto n = std::make_shared<int>(3);
    auto t = std::make_shared<double>(1.0), q = std::make_shared<double>(0.0);
    auto regime = std::make_shared<std::string>("schur");
    auto choice = std::make_shared<std::string>("independent");
    auto logfile = std::make_shared<std::string>();
    run->add_option("--n", *n, "number of levels")->required();
    run->add_option("--t", *t)->required();
    run->add_option("--regime", *regime, "schur|q");
    run->add_option("--choice", *choice, "push_left|push_right|independent");
    run->add_option("--q", *q);
    run->add_option("--log", *logfile, "write the event log CSV here");
    run->callback([=, &g, &elapsed] {
      const dynamics::Regime rg = *regime == "q" ? dynamics::Regime::q : dynamics::Regime::schur;
      dynamics::Choice ch = dynamics::Choice::independent;
      if (*choice == "push_left") ch = dynamics::Choice::push_left;
      else if (*choice == "push_right") ch = dynamics::Choice::push_right;
      Rng rng(g.seed);
      std::vector<dynamics::Event> log;
      const auto st = dynamics::evolve_array(dynamics::packed_state(*n), *t,
                                             dynamics::DynamicsProfile(rg, ch, *q), rng,
                                             logfile->empty() ? nullptr : &log);
      if (!logfile->empty()) write_text(*logfile, dynamics::event_log_csv(log));
      json rows = json::array();
      for (auto& row : st.rows) rows.push_back(row);
      json env{{"command", "dynamics run"},
               {"params", params_json({{"n", *n}, {"t", *t}, {"regime", *regime}, {"choice", *choice}, {"q", *q}})},
               {"seed", g.seed},
               {"rows", rows},
               {"error_estimate", 0.0},
               {"n_samples", 1}};
      emit(g, env, elapsed());
    });

    auto* marg = dy->add_subcommand("marginal", "one-dimensional marginal chains");
    auto kind = std::make_shared<std::string>("qtasep");
    auto mn = std::make_shared<int>(3);
    auto mq = std::make_shared<double>(0.5), mt = std::make_shared<double>(1.0);
    marg->add_option("--kind", *kind, "tasep|pushtasep|qtasep|qpushtasep")->required();
    marg->add_option("--n", *mn)->required();
    marg->add_option("--q", *mq);
    marg->add_option("--t", *mt)->required();
    marg->callback([=, &g, &elapsed] {
      dynamics::MarginalKind k = dynamics::MarginalKind::qtasep;
      if (*kind == "tasep") k = dynamics::MarginalKind::tasep;
      else if (*kind == "pushtasep") k = dynamics::MarginalKind::pushtasep;
      else if (*kind == "qpushtasep") k = dynamics::MarginalKind::qpushtasep;
      else if (*kind != "qtasep") throw CLI::ValidationError("--kind", "unknown marginal kind");
      Rng rng(g.seed);
      const auto y = dynamics::run_marginal(k, *mn, *mq, *mt, rng);
      json env{{"command", "dynamics marginal"},
               {"params", params_json({{"kind", *kind}, {"n", *mn}, {"q", *mq}, {"t", *mt}})},
               {"seed", g.seed},
               {"positions", y},
               {"error_estimate", 0.0},
               {"n_samples", 1}};
      emit(g, env, elapsed());
    });

    auto* rsk = dy->add_subcommand("rsk", "Poisson words / row insertion");
    auto rn = std::make_shared<int>(4);
    auto rt = std::make_shared<double>(1.0);
    rsk->add_option("--n", *rn)->required();
    rsk->add_option("--t", *rt)->required();
    rsk->callback([=, &g, &elapsed] {
      Rng rng(g.seed);
      const auto res = dynamics::rsk_from_words(*rn, *rt, rng);
      json rows = json::array();
      for (auto& row : res.state.rows) rows.push_back(row);
      json stars = json::array();
      for (auto& [time, letter] : res.stars) stars.push_back({{"time", time}, {"letter", letter}});
      json env{{"command", "dynamics rsk"},
               {"params", params_json({{"n", *rn}, {"t", *rt}})},
               {"seed", g.seed},
               {"rows", rows},
               {"stars", stars},
               {"error_estimate", 0.0},
               {"n_samples", 1}};
      emit(g, env, elapsed());
    });
  }

  // ------------------------------------------------------------- observables
  auto* ob = app.add_subcommand("observables", "exact formula evaluators");
  {
    auto* density = ob->add_subcommand("density", "vertical-lozenge density");
    auto t = std::make_shared<double>(1.0);
    auto h = std::make_shared<int>(1);
    auto n = std::make_shared<std::int64_t>(0);
    density->add_option("--t", *t)->required();
    density->add_option("--h", *h)->required();
    density->add_option("--n", *n)->required();
    density->callback([=, &g, &elapsed] {
      const double v = observables::density_vertical(*t, *h, *n);
      json env{{"command", "observables density"},
               {"params", params_json({{"t", *t}, {"h", *h}, {"n", *n}})},
               {"seed", g.seed},
               {"value", v},
               {"error_estimate", 1e-10},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* qm = ob->add_subcommand("qmoments", "q-Whittaker moments");
    auto q = std::make_shared<double>(0.5), qt = std::make_shared<double>(1.0);
    auto levels = std::make_shared<std::string>("1");
    auto mode = std::make_shared<std::string>("unnested");
    qm->add_option("--q", *q)->required();
    qm->add_option("--t", *qt)->required();
    qm->add_option("--levels", *levels, "comma separated, weakly decreasing")->required();
    qm->add_option("--mode", *mode, "nested|unnested");
    qm->callback([=, &g, &elapsed] {
      observables::MomentRequest req{*q, *qt, parse_levels(*levels)};
      const auto m = *mode == "nested" ? observables::MomentMode::nested
                                       : observables::MomentMode::unnested;
      const double v = observables::qmoments(req, m);
      json env{{"command", "observables qmoments"},
               {"params", params_json({{"q", *q}, {"t", *qt}, {"levels", *levels}, {"mode", *mode}})},
               {"seed", g.seed},
               {"value", v},
               {"error_estimate", 1e-10},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* pm = ob->add_subcommand("pmoments", "semi-discrete polymer moments");
    auto tau = std::make_shared<double>(1.0);
    auto plv = std::make_shared<std::string>("1");
    auto oracle = std::make_shared<bool>(false);
    pm->add_option("--tau", *tau)->required();
    pm->add_option("--levels", *plv)->required();
    pm->add_flag("--oracle", *oracle, "use the ODE oracle instead of the contour integral");
    pm->callback([=, &g, &elapsed] {
      const auto lv = parse_levels(*plv);
      const double v = *oracle ? observables::polymer_moments_ode_oracle(*tau, lv)
                               : observables::polymer_moments_integral(*tau, lv);
      json env{{"command", "observables pmoments"},
               {"params", params_json({{"tau", *tau}, {"levels", *plv}, {"oracle", *oracle}})},
               {"seed", g.seed},
               {"value", v},
               {"error_estimate", 1e-9},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* ql = ob->add_subcommand("qlaplace", "q-Laplace generating series");
    auto lq = std::make_shared<double>(0.5), lt = std::make_shared<double>(1.0);
    auto ln = std::make_shared<int>(1);
    auto zeta = std::make_shared<double>(0.2);
    auto ell = std::make_shared<int>(6), nmax = std::make_shared<int>(48);
    ql->add_option("--q", *lq)->required();
    ql->add_option("--t", *lt)->required();
    ql->add_option("--n", *ln, "N");
    ql->add_option("--zeta", *zeta)->required();
    ql->add_option("--ell-max", *ell);
    ql->add_option("--n-max", *nmax);
    ql->callback([=, &g, &elapsed] {
      observables::LaplaceRequest req;
      req.q = *lq;
      req.t = *lt;
      req.n_levels = *ln;
      req.zeta = {*zeta, 0.0};
      req.ell_max = *ell;
      req.n_max = *nmax;
      const auto r = observables::qlaplace_series(req);
      json env{{"command", "observables qlaplace"},
               {"params", params_json({{"q", *lq}, {"t", *lt}, {"n", *ln}, {"zeta", *zeta}})},
               {"seed", g.seed},
               {"value", r.value.real()},
               {"value_imag", r.value.imag()},
               {"error_estimate", r.tail_bound},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* mb = ob->add_subcommand("mellin", "N=1 Mellin-Barnes representation");
    auto bq = std::make_shared<double>(0.5), bt = std::make_shared<double>(1.0);
    auto bz = std::make_shared<double>(0.2);
    mb->add_option("--q", *bq)->required();
    mb->add_option("--t", *bt)->required();
    mb->add_option("--zeta", *bz)->required();
    mb->callback([=, &g, &elapsed] {
      const auto v = observables::mellin_barnes_n1(*bq, *bt, {*bz, 0.0});
      json env{{"command", "observables mellin"},
               {"params", params_json({{"q", *bq}, {"t", *bt}, {"zeta", *bz}})},
               {"seed", g.seed},
               {"value", v.real()},
               {"value_imag", v.imag()},
               {"error_estimate", 1e-10},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });
  }

  // ------------------------------------------------------------- asymptotics
  auto* as = app.add_subcommand("asymptotics", "closed-form asymptotic quantities");
  {
    auto* shape = as->add_subcommand("shape", "limit-shape region and density");
    auto tau = std::make_shared<double>(1.0), nu = std::make_shared<double>(1.0),
         eta = std::make_shared<double>(1.0);
    shape->add_option("--tau", *tau)->required();
    shape->add_option("--nu", *nu)->required();
    shape->add_option("--eta", *eta)->required();
    shape->callback([=, &g, &elapsed] {
      const auto r = asymptotics::limit_shape_density({*tau, *nu, *eta});
      json env{{"command", "asymptotics shape"},
               {"params", params_json({{"tau", *tau}, {"nu", *nu}, {"eta", *eta}})},
               {"seed", g.seed},
               {"label", asymptotics::region_name(r.label)},
               {"rho", r.rho},
               {"boundary", r.boundary},
               {"error_estimate", 0.0},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* ly = as->add_subcommand("lyapunov", "moment Lyapunov exponents");
    auto p = std::make_shared<int>(1);
    auto cont = std::make_shared<bool>(false);
    ly->add_option("--p", *p)->required();
    ly->add_flag("--continuous", *cont);
    ly->callback([=, &g, &elapsed] {
      const double v = *cont ? asymptotics::lyapunov_continuous(*p)
                             : asymptotics::lyapunov_semidiscrete(*p);
      json env{{"command", "asymptotics lyapunov"},
               {"params", params_json({{"p", *p}, {"continuous", *cont}})},
               {"seed", g.seed},
               {"value", v},
               {"error_estimate", 1e-12},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* kc = as->add_subcommand("constants", "KPZ constants f, s, g");
    auto kappa = std::make_shared<double>(1.0);
    kc->add_option("--kappa", *kappa)->required();
    kc->callback([=, &g, &elapsed] {
      const auto c = asymptotics::kpz_constants(*kappa);
      json env{{"command", "asymptotics constants"},
               {"params", params_json({{"kappa", *kappa}})},
               {"seed", g.seed},
               {"f", c.f},
               {"s", c.s},
               {"g_", c.g},
               {"error_estimate", 1e-12},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* lf = as->add_subcommand("laplace", "Fredholm-type Laplace transform");
    auto u = std::make_shared<double>(0.5), lt = std::make_shared<double>(1.0);
    auto ln = std::make_shared<int>(1), ell = std::make_shared<int>(3);
    lf->add_option("--u", *u)->required();
    lf->add_option("--t", *lt)->required();
    lf->add_option("--n", *ln);
    lf->add_option("--ell-max", *ell);
    lf->callback([=, &g, &elapsed] {
      const double v = asymptotics::laplace_fredholm(*u, *lt, *ln, *ell);
      json env{{"command", "asymptotics laplace"},
               {"params", params_json({{"u", *u}, {"t", *lt}, {"n", *ln}, {"ell_max", *ell}})},
               {"seed", g.seed},
               {"value", v},
               {"error_estimate", 1e-6},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });

    auto* tw = as->add_subcommand("tw", "Tracy-Widom GUE series");
    auto r = std::make_shared<double>(0.0), gg = std::make_shared<double>(2.0);
    auto tell = std::make_shared<int>(8);
    tw->add_option("--r", *r)->required();
    tw->add_option("--g", *gg)->required();
    tw->add_option("--ell-max", *tell);
    tw->callback([=, &g, &elapsed] {
      const double v = asymptotics::tracy_widom_cdf(*r, *gg, *tell);
      json env{{"command", "asymptotics tw"},
               {"params", params_json({{"r", *r}, {"g", *gg}, {"ell_max", *tell}})},
               {"seed", g.seed},
               {"value", v},
               {"error_estimate", 2e-5},
               {"n_samples", 0}};
      emit(g, env, elapsed());
    });
  }

  // ------------------------------------------------------------- polymer
  auto* po = app.add_subcommand("polymer", "O'Connell-Yor polymer Monte Carlo");
  {
    auto* sim = po->add_subcommand("simulate", "partition function replicas");
    auto n = std::make_shared<int>(4);
    auto t = std::make_shared<double>(2.0), dt = std::make_shared<double>(1e-3);
    auto reps = std::make_shared<int>(1000);
    auto csv = std::make_shared<std::string>();
    sim->add_option("--n", *n)->required();
    sim->add_option("--t", *t)->required();
    sim->add_option("--dt", *dt);
    sim->add_option("--replicas", *reps);
    sim->add_option("--csv", *csv, "write per-replica log Z CSV here");
    sim->callback([=, &g, &elapsed] {
      const auto logz = polymer::sample_log_partition(*n, *t, *reps, *dt, g.seed, g.threads);
      const auto ms = stats::mean_stderr(logz);
      if (!csv->empty()) {
        std::ostringstream out;
        out << "replica,n,t,logZ\n";
        for (int i = 0; i < *reps; ++i) out << i << "," << *n << "," << *t << "," << logz[i] << "\n";
        write_text(*csv, out.str());
      }
      json env{{"command", "polymer simulate"},
               {"params", params_json({{"n", *n}, {"t", *t}, {"dt", *dt}, {"replicas", *reps}})},
               {"seed", g.seed},
               {"mean_logZ", ms.mean},
               {"stderr", ms.stderr_},
               {"error_estimate", ms.stderr_},
               {"n_samples", *reps}};
      emit(g, env, elapsed());
    });

    auto* hi = po->add_subcommand("hierarchy", "T array via lgv or sde");
    auto hn = std::make_shared<int>(3);
    auto tau = std::make_shared<double>(1.0), hdt = std::make_shared<double>(1e-3);
    auto method = std::make_shared<std::string>("lgv");
    hi->add_option("--n", *hn)->required();
    hi->add_option("--tau", *tau)->required();
    hi->add_option("--dt", *hdt);
    hi->add_option("--method", *method, "lgv|sde");
    hi->callback([=, &g, &elapsed] {
      polymer::PolymerEnvironment env(*hn, *tau, *hdt, g.seed);
      const auto st = polymer::simulate_hierarchy(
          *hn, *tau, env,
          *method == "sde" ? polymer::HierarchyMethod::sde : polymer::HierarchyMethod::lgv);
      json rows = json::array();
      for (auto& row : st.T) rows.push_back(row);
      json out{{"command", "polymer hierarchy"},
               {"params", params_json({{"n", *hn}, {"tau", *tau}, {"dt", *hdt}, {"method", *method}})},
               {"seed", g.seed},
               {"T", rows},
               {"error_estimate", 10.0 * *hdt},
               {"n_samples", 1}};
      emit(g, out, elapsed());
    });

    auto* lln = po->add_subcommand("lln", "law of large numbers experiment");
    auto ln = std::make_shared<int>(128);
    auto kappa = std::make_shared<double>(1.0), ldt = std::make_shared<double>(2e-3);
    auto lreps = std::make_shared<int>(200);
    lln->add_option("--n", *ln);
    lln->add_option("--kappa", *kappa);
    lln->add_option("--replicas", *lreps);
    lln->add_option("--dt", *ldt);
    lln->callback([=, &g, &elapsed] {
      const auto rep = polymer::lln_experiment(*ln, *kappa, *lreps, *ldt, g.seed, g.threads);
      json env{{"command", "polymer lln"},
               {"params", params_json({{"n", *ln}, {"kappa", *kappa}, {"replicas", *lreps}, {"dt", *ldt}})},
               {"seed", g.seed},
               {"mean", rep.mean},
               {"stderr", rep.stderr_},
               {"f_target", rep.f_target},
               {"bias_scale", rep.bias_scale},
               {"error_estimate", rep.stderr_},
               {"n_samples", rep.replicas}};
      emit(g, env, elapsed());
    });
  }

  // ------------------------------------------------------------- validate
  {
    auto* val = app.add_subcommand("validate", "run an acceptance suite");
    auto suite = std::make_shared<std::string>("all");
    auto budget = std::make_shared<double>(0.0);
    val->add_option("--suite", *suite, "algebra|tilings|dynamics|observables|asymptotics|polymer|all");
    val->add_option("--budget", *budget, "seconds; 0 = unlimited");
    val->callback([=, &g, &elapsed, &exit_code] {
      validate::ValidationReport rep;
      try {
        rep = validate::run_suite(*suite, g.seed, *budget, g.threads, &std::cerr);
      } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("--suite", e.what());
      }
      json checks = json::array();
      for (auto& c : rep.checks)
        checks.push_back({{"id", c.id},
                          {"description", c.description},
                          {"status", c.skipped ? "skipped" : c.passed ? "pass" : "fail"},
                          {"measured", c.measured},
                          {"expected", c.expected},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail}});
      json env{{"command", "validate"},
               {"params", params_json({{"suite", *suite}, {"budget", *budget}})},
               {"seed", g.seed},
               {"checks", checks},
               {"pass", rep.pass()},
               {"error_estimate", 0.0},
               {"n_samples", 0}};
      emit(g, env, elapsed());
      if (!rep.pass()) exit_code = 1;
    });
  }

  // ------------------------------------------------------------- report
  {
    auto* rep = app.add_subcommand("report", "merge result envelopes into CSV");
    auto inputs = std::make_shared<std::vector<std::string>>();
    rep->add_option("inputs", *inputs, "envelope JSON files")->required();
    rep->callback([=, &g] {
      std::vector<json> envs;
      std::set<std::string> columns;
      for (auto& path : *inputs) {
        std::ifstream f(path);
        if (!f) throw CLI::ValidationError("inputs", "cannot read " + path);
        json e = json::parse(f, nullptr, false);
        if (e.is_discarded() || !e.is_object() || !e.contains("command"))
          throw CLI::ValidationError("inputs", "not a result envelope: " + path);
        json flat = json::object();
        for (auto& [k, v] : e.items()) {
          if (k == "params" && v.is_object()) {
            for (auto& [pk, pv] : v.items()) flat[pk] = pv;
          } else if (v.is_primitive()) {
            flat[k] = v;
          }
        }
        for (auto& [k, v] : flat.items()) columns.insert(k);
        envs.push_back(std::move(flat));
      }
      std::ostringstream out;
      bool first = true;
      for (auto& c : columns) {
        out << (first ? "" : ",") << c;
        first = false;
      }
      out << "\n";
      for (auto& e : envs) {
        first = true;
        for (auto& c : columns) {
          out << (first ? "" : ",");
          first = false;
          if (e.contains(c)) {
            const auto& v = e[c];
            if (v.is_string()) out << v.get<std::string>();
            else out << v.dump();
          }
        }
        out << "\n";
      }
      write_text(output_path(g, "-"), out.str());
    });
  }

  app.require_subcommand(1);
  try {
    std::vector<std::string> rargs(args.rbegin(), args.rend());  // CLI11 takes reversed tokens
    app.parse(rargs);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "validation"}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "runtime"}}.dump() << "\n";
    return 1;
  }

  return exit_code;
}
