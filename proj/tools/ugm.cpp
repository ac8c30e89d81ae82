// ugm: validate, evaluate, render and serve user-goal models.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "ugm/cli.hpp"

int main(int argc, char** argv) {
  using namespace ugm::cli;

  CLI::App app{"Persona user-goal models: satisfaction propagation and implied-vulnerability checks"};
  app.require_subcommand(1);

  Options opts;
  const std::map<std::string, Format> formats{{"human", Format::Human},
                                              {"machine", Format::Machine}};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", opts.model, "Model document")->required()->check(CLI::ExistingFile);
  };

  auto* validate = app.add_subcommand("validate", "Referential checks and implied vulnerabilities");
  add_common(validate);
  validate->add_option("--strategy", opts.strategy, "Strategy file (goalName,satisfactionLabel rows)");
  validate->add_option("--format", opts.format, "human|machine")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* evaluate = app.add_subcommand("evaluate", "Propagate satisfaction and print the score table");
  add_common(evaluate);
  evaluate->add_option("--persona", opts.personas, "Persona to evaluate (repeatable; default all)");
  evaluate->add_option("--strategy", opts.strategy, "Strategy file (goalName,satisfactionLabel rows)");
  evaluate->add_option("--format", opts.format, "human|machine")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  auto* exportWb = app.add_subcommand("export-workbook", "Write the user-goal and contribution sheets");
  add_common(exportWb);
  exportWb->add_option("--persona", opts.personas, "Persona whose workbook to generate");
  exportWb->add_option("--out", opts.out, "Output prefix (default: model path without extension)");

  auto* importWb = app.add_subcommand("import-workbook", "Apply completed workbook sheets to the model");
  add_common(importWb);
  importWb->add_option("--workbook", opts.workbook,
                       "Workbook prefix (default: model path without extension)");
  importWb->add_option("--out", opts.out, "Updated model document (default: stdout)");

  auto* render = app.add_subcommand("render", "Emit the user-goal graph in dot syntax");
  add_common(render);
  render->add_option("--persona", opts.personas, "Persona to render (repeatable; default all)");
  render->add_option("--strategy", opts.strategy, "Strategy file (goalName,satisfactionLabel rows)");
  render->add_option("--out", opts.out, "Output path (default: stdout)");

  auto* serve = app.add_subcommand("serve", "Serve the what-if HTTP interface");
  add_common(serve);
  serve->add_option("--port", opts.port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", opts.host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsageOrIo;
  }

  if (*validate) return cmd_validate(opts, std::cout, std::cerr);
  if (*evaluate) return cmd_evaluate(opts, std::cout, std::cerr);
  if (*exportWb) return cmd_export_workbook(opts, std::cout, std::cerr);
  if (*importWb) return cmd_import_workbook(opts, std::cout, std::cerr);
  if (*render) return cmd_render(opts, std::cout, std::cerr);
  if (*serve) return cmd_serve(opts, std::cout, std::cerr);
  return kUsageOrIo;
}
