// Batch verification front end: mesh ingestion, named suites, JSON reports.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wfela/complexes.hpp"
#include "wfela/eladofs.hpp"
#include "wfela/identities.hpp"

using namespace wfela;
using nlohmann::ordered_json;

namespace {

struct Options {
  int r = 3;
  std::string geometry = "disphenoid";
  std::string mode = "auto";
  int trials = 5;
  std::uint64_t seed = 7;
  std::string out;
  std::string format = "json";
  int table_r = -1;
};

RankMode rank_mode(const std::string& m) {
  if (m == "exact") return RankMode::Exact;
  if (m == "modular") return RankMode::Modular;
  return RankMode::Auto;
}

SplitComplex load_geometry(const std::string& g) {
  std::ifstream f(g);
  if (f.good()) {
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return wf_split_global(mesh_from_json(text));
  }
  return wf_split_global(builtin_mesh(g));
}

struct Report {
  ordered_json j;
  bool all_pass = true;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  Report(const std::string& command, const Options& o) {
    j["command"] = command;
    j["r"] = o.r;
    j["geometry"] = o.geometry;
    j["mode"] = o.mode;
    j["seed"] = o.seed;
    j["checks"] = ordered_json::array();
  }
  void add(const std::string& name, const std::string& expected, const std::string& got, bool pass) {
    j["checks"].push_back({{"name", name}, {"expected", expected}, {"got", got}, {"pass", pass}});
    all_pass = all_pass && pass;
  }
  void add(const CheckRow& c) { add(c.name, c.expected, c.got, c.pass); }
  int finish(const Options& o) {
    long ms = 0;
    if (std::getenv("WFELA_TIMING")) {
      ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
               .count();
    }
    j["elapsed_ms"] = ms;
    std::string text;
    if (o.format == "csv") {
      text = "name,expected,got,pass\n";
      for (const auto& c : j["checks"])
        text += c["name"].get<std::string>() + "," + c["expected"].get<std::string>() + "," +
                c["got"].get<std::string>() + "," + (c["pass"].get<bool>() ? "pass" : "FAIL") + "\n";
    } else {
      text = j.dump(2) + "\n";
    }
    if (o.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(o.out);
      f << text;
    }
    return all_pass ? 0 : 1;
  }
};

void add_exactness(Report& rep, const ExactnessReport& ex) {
  std::string pfx = ex.name + " r=" + std::to_string(ex.r) + ": ";
  rep.add(pfx + "complex", "0", ex.complex_pass ? "0" : "nonzero", ex.complex_pass);
  rep.add(pfx + "membership", "subset", ex.membership_pass ? "subset" : "violation", ex.membership_pass);
  rep.add(pfx + "head kernel", std::to_string(ex.head_expected), std::to_string(ex.head_dim), ex.head_pass);
  for (const auto& s : ex.slots)
    rep.add(pfx + "slot " + s.at, std::to_string(s.in_rank), std::to_string(s.out_kernel), s.pass);
  if (ex.tail_checked)
    rep.add(pfx + "tail surjective", std::to_string(ex.tail_expected), std::to_string(ex.tail_rank),
            ex.tail_pass);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification toolkit for elasticity complexes on Worsey-Farin splits"};
  app.require_subcommand(1);
  Options o;

  // ---- dims ----
  auto* dims = app.add_subcommand("dims", "dimension tables: expected vs computed");
  std::string table = "2";
  dims->add_option("--table", table, "1 | 2 | U")->required();
  dims->add_option("--r", o.r, "polynomial degree parameter");
  dims->add_option("--geometry", o.geometry, "builtin name or mesh json path");
  dims->add_option("--mode", o.mode, "exact | modular | auto");
  dims->add_option("--seed", o.seed, "seed for the modular prime stream");
  dims->add_option("--out", o.out, "report path (default stdout)");
  dims->add_option("--format", o.format, "json | csv");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "named verification suites");
  verify->require_subcommand(1);
  std::string seq_name = "elseq", dof_space = "U2";
  auto add_common = [&](CLI::App* c) {
    c->add_option("--r", o.r);
    c->add_option("--geometry", o.geometry);
    c->add_option("--mode", o.mode);
    c->add_option("--trials", o.trials);
    c->add_option("--seed", o.seed);
    c->add_option("--out", o.out);
    c->add_option("--format", o.format);
  };
  auto* vex = verify->add_subcommand("exactness", "complex + exactness of a cataloged sequence");
  vex->add_option("name", seq_name, "sequence name")->required();
  add_common(vex);
  auto* vdof = verify->add_subcommand("dofs", "DOF counts, unisolvence, entity audit");
  vdof->add_option("space", dof_space, "U0 | U1 | U2 | U3")->required();
  add_common(vdof);
  auto* vcom = verify->add_subcommand("commuting", "Theorem 6.1 commuting projections");
  add_common(vcom);
  auto* vid = verify->add_subcommand("identities", "calculus identity suite");
  add_common(vid);
  auto* vch = verify->add_subcommand("characterization", "equivalent definitions of U1");
  add_common(vch);
  auto* vbgg = verify->add_subcommand("bgg", "derived-complex constructor vs direct assembly");
  add_common(vbgg);
  auto* vpr = verify->add_subcommand("projrigid", "projection of rigid motions onto U3_0");
  add_common(vpr);

  // ---- split ----
  auto* split = app.add_subcommand("split", "Worsey-Farin split of a mesh, as json");
  split->add_option("--geometry", o.geometry, "builtin name or mesh json path");
  split->add_option("--out", o.out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  set_prime_seed(o.seed);

  try {
    if (*split) {
      SplitComplex sc = load_geometry(o.geometry);
      std::string text = split_to_json(sc);
      if (o.out.empty())
        std::cout << text << "\n";
      else {
        std::ofstream f(o.out);
        f << text << "\n";
      }
      return 0;
    }

    if (*dims) {
      Report rep("dims", o);
      if (table == "1") {
        SplitComplex sc = load_geometry(o.geometry);
        SpaceCache cache(sc);
        for (const char* row : {"V", "Vr", "L", "Lr", "S", "R0", "Q1"}) {
          for (int k = 0; k <= 2; ++k) {
            DimFormula f = table1_dim(row, k, o.r);
            std::string nm = std::string(row) + "^" + std::to_string(k) + " r=" + std::to_string(o.r);
            if (!f.valid) {
              if ((std::string(row) == "R0" && k > 0) || (std::string(row) == "Q1" && k != 1)) continue;
              rep.add(nm, "skipped (below validity)", "skipped", true);
              continue;
            }
            TableEntry e = table1_space(row, k, o.r);
            long got = cache.face_space(e.space, e.degree, 0).dim;
            rep.add(nm, std::to_string(f.value), std::to_string(got), got == f.value);
          }
        }
      } else if (table == "2") {
        SplitComplex sc = load_geometry(o.geometry);
        SpaceCache cache(sc);
        for (const char* row : {"V", "Vr", "L", "Lr", "cVr", "S", "Sr"}) {
          for (int k = 0; k <= 3; ++k) {
            DimFormula f = table2_dim(row, k, o.r);
            std::string nm = std::string(row) + "^" + std::to_string(k) + " r=" + std::to_string(o.r);
            if (!f.valid) {
              if (std::string(row) == "cVr" && k < 2) continue;
              rep.add(nm, "skipped (below validity)", "skipped", true);
              continue;
            }
            if (std::string(row) == "cVr" && k < 2) continue;
            TableEntry e = table2_space(row, k, o.r);
            long got = cache.tet_space(e.space, e.degree).dim;
            rep.add(nm, std::to_string(f.value), std::to_string(got), got == f.value);
          }
        }
      } else if (table == "U") {
        SplitComplex sc = load_geometry(o.geometry);
        SpaceCache cache(sc);
        for (bool ring : {false, true}) {
          for (int k = 0; k <= 3; ++k) {
            DimFormula f = u_dim(k, o.r, ring);
            std::string nm = std::string(ring ? "ring U^" : "U^") + std::to_string(k) +
                             " r=" + std::to_string(o.r);
            if (!f.valid) {
              rep.add(nm, "skipped (below validity)", "skipped", true);
              continue;
            }
            TableEntry e = u_space(k, o.r, ring);
            long got = cache.tet_space(e.space, e.degree).dim;
            rep.add(nm, std::to_string(f.value), std::to_string(got), got == f.value);
          }
        }
      } else {
        throw CLI::ValidationError("--table must be 1, 2, or U");
      }
      return rep.finish(o);
    }

    SplitComplex sc = load_geometry(o.geometry);
    SpaceCache cache(sc);

    if (*vex) {
      int minr = sequence_min_r(seq_name);
      if (o.r < minr)
        throw CLI::ValidationError("sequence " + seq_name + " requires r >= " + std::to_string(minr));
      Report rep("verify exactness " + seq_name, o);
      add_exactness(rep, catalog_run(cache, seq_name, o.r, rank_mode(o.mode)));
      return rep.finish(o);
    }
    if (*vdof) {
      if (o.r < 3) throw CLI::ValidationError("DOF suites require r >= 3");
      Report rep("verify dofs " + dof_space, o);
      UnisolvenceReport u = unisolvence(cache, dof_space, o.r);
      rep.add("dim", std::to_string(u.dim), std::to_string(u.dof_count), u.square);
      rep.add("unisolvent", "true", u.nonsingular ? "true" : "false", u.nonsingular);
      rep.add("vertex_dofs", dof_space == "U2" || dof_space == "U3" ? "0" : "-",
              std::to_string(u.vertex_dofs),
              dof_space == "U2" || dof_space == "U3" ? u.vertex_dofs == 0 : true);
      rep.add("edge_dofs", dof_space == "U2" || dof_space == "U3" ? "0" : "-", std::to_string(u.edge_dofs),
              dof_space == "U2" || dof_space == "U3" ? u.edge_dofs == 0 : true);
      for (const auto& [tag, c] : u.family_counts) rep.add(tag, "-", std::to_string(c), true);
      rep.j["dof_mode"] = u.mode;
      return rep.finish(o);
    }
    if (*vcom) {
      if (o.r < 3) throw CLI::ValidationError("commuting requires r >= 3");
      Report rep("verify commuting", o);
      CommutingReport c = commuting_suite(cache, o.r, o.trials, o.seed);
      for (const auto& row : c.checks) rep.add(row);
      rep.add("failures", "0", std::to_string(c.failures), c.failures == 0);
      return rep.finish(o);
    }
    if (*vid) {
      Report rep("verify identities", o);
      IdentitySuiteReport s = identity_suite(cache, o.trials, 4, o.seed);
      for (const auto& i : s.identities)
        rep.add(i.identity, "0 failures of " + std::to_string(i.trials),
                std::to_string(i.failures) + " failures", i.pass());
      return rep.finish(o);
    }
    if (*vch) {
      if (o.r < 3) throw CLI::ValidationError("characterization requires r >= 3");
      Report rep("verify characterization", o);
      for (bool ring : {false, true})
        for (const auto& c : characterization_check(cache, o.r, ring))
          rep.add(std::string(ring ? "ring: " : "") + c.name, c.expected, c.got, c.pass);
      return rep.finish(o);
    }
    if (*vbgg) {
      if (o.r < 3) throw CLI::ValidationError("bgg requires r >= 3");
      Report rep("verify bgg", o);
      for (bool ring : {false, true})
        for (const auto& c : bgg_check(cache, o.r, ring, rank_mode(o.mode)))
          rep.add(std::string(ring ? "(4.10) " : "(4.9) ") + c.name, c.expected, c.got, c.pass);
      return rep.finish(o);
    }
    if (*vpr) {
      Report rep("verify projrigid", o);
      for (const auto& c : proj_rigid_check(cache)) rep.add(c);
      return rep.finish(o);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
