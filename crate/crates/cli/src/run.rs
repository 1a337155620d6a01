//! Command dispatch.

use hgx_core::algstruct::{hopf_monoid_check, DgModule, Side};
use hgx_core::chain::ChainMap;
use hgx_core::cobar::cotor;
use hgx_core::comod::Comodule;
use hgx_core::coring::{can, canonical_coring, descent_unit, galois_as_coring_morphism, rho_coring, trivial_coring};
use hgx_core::hopfgalois::{compare_with_beta_eta, galois_map, verify_hhg};
use hgx_core::linalg::{Field, GradedLinearMap};
use hgx_core::postnikov::{postnikov_factorize, to_zero};
use hgx_core::{Error, Verdict};

use crate::build::{Builder, Obj};
use crate::document::{Diagnostic, Document, ObjectKind};
use crate::report::Report;
use crate::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Homology,
    Cotor,
    Hopf,
    Galois,
    HhgVerify,
    Postnikov,
    Coring,
    Descent,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Validate,
        Command::Homology,
        Command::Cotor,
        Command::Hopf,
        Command::Galois,
        Command::HhgVerify,
        Command::Postnikov,
        Command::Coring,
        Command::Descent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Homology => "homology",
            Command::Cotor => "cotor",
            Command::Hopf => "hopf",
            Command::Galois => "galois",
            Command::HhgVerify => "hhg-verify",
            Command::Postnikov => "postnikov",
            Command::Coring => "coring",
            Command::Descent => "descent",
        }
    }

    /// Object kinds the command runs on; `None` for commands on extensions.
    fn kinds(self) -> Option<&'static [ObjectKind]> {
        use ObjectKind::*;
        match self {
            Command::Validate => Some(&[Complex, Algebra, Coalgebra, Bimonoid, Comodule, ComoduleAlgebra, Module]),
            Command::Homology => Some(&[Complex, Algebra, Coalgebra, Bimonoid, Comodule, ComoduleAlgebra, Module]),
            Command::Cotor => Some(&[Coalgebra, Bimonoid, Comodule]),
            Command::Hopf => Some(&[Bimonoid]),
            Command::Postnikov => Some(&[Comodule]),
            Command::Galois | Command::HhgVerify | Command::Coring | Command::Descent => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub object: Option<String>,
    pub upto: Option<usize>,
}

fn input(loc: impl Into<String>, msg: impl Into<String>) -> RunError {
    RunError::Input(vec![Diagnostic::new(loc, msg)])
}

fn verdict(v: Verdict) -> Result<(), String> {
    v.map_err(|v| v.to_string())
}

/// Record an error from a pipeline step: a failed axiom becomes a failed
/// check, anything else an input diagnostic.
fn absorb<T>(report: &mut Report, target: &str, step: &str, r: Result<T, RunError>) -> Option<T> {
    match r {
        Ok(t) => Some(t),
        Err(RunError::Core(Error::Invalid(v))) => {
            report.check(target, step, Err(v.to_string()));
            None
        }
        Err(RunError::Core(e)) => {
            report.diagnostics.push(Diagnostic::new(target, e.to_string()));
            None
        }
        Err(RunError::Input(ds)) => {
            report.diagnostics.extend(ds);
            None
        }
    }
}

fn core<T>(r: hgx_core::Result<T>) -> Result<T, RunError> {
    r.map_err(RunError::Core)
}

/// Names the command runs on: the `--object` if given, else every
/// applicable entry of the document.
fn targets(doc: &Document, cmd: Command, object: Option<&str>) -> Result<Vec<String>, RunError> {
    let names: Vec<String> = match cmd.kinds() {
        Some(kinds) => doc
            .objects
            .iter()
            .filter(|(_, o)| kinds.contains(&o.kind))
            .map(|(k, _)| k.clone())
            .collect(),
        None => doc.extensions.keys().cloned().collect(),
    };
    match object {
        Some(o) => {
            let valid = cmd == Command::Validate && (doc.morphisms.contains_key(o) || doc.extensions.contains_key(o));
            if names.iter().any(|n| n == o) || valid {
                Ok(vec![o.to_string()])
            } else if doc.objects.contains_key(o) || doc.extensions.contains_key(o) || doc.morphisms.contains_key(o) {
                Err(input("--object", format!("`{o}` is not a valid target for `{}`", cmd.name())))
            } else {
                Err(input("--object", format!("no object named `{o}`")))
            }
        }
        None if cmd == Command::Validate => {
            let mut all = names;
            all.extend(doc.morphisms.keys().cloned());
            all.extend(doc.extensions.keys().cloned());
            Ok(all)
        }
        None if names.is_empty() => Err(input("document", format!("nothing in the document applies to `{}`", cmd.name()))),
        None => Ok(names),
    }
}

/// The bound `upto` for a command, defaulting to `default` and capped at `max`.
fn bound(upto: Option<usize>, default: usize, max: usize, what: &str) -> Result<usize, RunError> {
    match upto {
        None => Ok(default),
        Some(k) if k <= max => Ok(k),
        Some(k) => Err(input(
            "--upto",
            format!("degree {k} is outside the reliable range for {what} (reliable up to {max})"),
        )),
    }
}

/// Verdict that every block of `g` in degrees `0..=upto` is invertible.
fn degreewise_iso<F: Field>(g: &GradedLinearMap<F>, upto: usize, what: &str) -> Verdict {
    for k in 0..=upto {
        let m = g.block(k);
        if m.rows() != m.cols() || m.rank() != m.cols() {
            return Err(hgx_core::Violation::new(
                format!("{what} is an isomorphism"),
                k,
                format!("{}x{} block of rank {}", m.rows(), m.cols(), m.rank()),
            ));
        }
    }
    Ok(())
}

pub fn run_on<F: Field>(field: F, doc: &Document, cmd: Command, opts: &Options, report: &mut Report) {
    let mut b = Builder::new(field, doc);
    let names = match targets(doc, cmd, opts.object.as_deref()) {
        Ok(n) => n,
        Err(e) => {
            absorb::<()>(report, "document", "target", Err(e));
            return;
        }
    };
    for name in names {
        let r = match cmd {
            Command::Validate => validate(&mut b, &name, report),
            Command::Homology => homology(&mut b, &name, opts, report),
            Command::Cotor => run_cotor(&mut b, &name, opts, report),
            Command::Hopf => hopf(&mut b, &name, opts, report),
            Command::Galois => galois(&mut b, &name, opts, report),
            Command::HhgVerify => hhg(&mut b, &name, opts, report),
            Command::Postnikov => postnikov(&mut b, &name, opts, report),
            Command::Coring => coring(&mut b, &name, report),
            Command::Descent => descent(&mut b, &name, opts, report),
        };
        absorb(report, &name, "construction", r);
    }
}

fn validate<F: Field>(b: &mut Builder<F>, name: &str, report: &mut Report) -> Result<(), RunError> {
    let doc = b.doc();
    if doc.objects.contains_key(name) {
        let o = b.object(name)?;
        let (what, v) = match &o {
            Obj::Complex(x) => ("chain complex", x.validate()),
            Obj::Algebra(a) => ("algebra", a.validate()),
            Obj::Coalgebra(c) => ("coalgebra", c.validate()),
            Obj::Bimonoid(h) => ("bimonoid", h.validate()),
            Obj::Comodule(m) => ("comodule", m.validate()),
            Obj::ComoduleAlgebra(a) => ("comodule algebra", a.validate()),
            Obj::Module(m) => ("module", m.validate()),
        };
        report.check(name, &format!("{what} axioms"), verdict(v));
    } else if let Some(m) = doc.morphisms.get(name) {
        let g = b.morphism(name)?;
        if m.shift == 0 {
            let src = b.object(&m.source)?.complex().clone();
            let tgt = b.object(&m.target)?.complex().clone();
            let cm = core(ChainMap::new(src, tgt, g))?;
            report.check(name, "chain map", verdict(cm.validate()));
        } else {
            report.notes.push(format!("{name}: shape checked only (shift {})", m.shift));
        }
    } else {
        match b.extension(name) {
            Ok(_) => report.check(name, "extension axioms", Ok(())),
            Err(RunError::Core(Error::Invalid(v))) => report.check(name, "extension axioms", Err(v.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn homology<F: Field>(b: &mut Builder<F>, name: &str, opts: &Options, report: &mut Report) -> Result<(), RunError> {
    let x = b.object(name)?.complex().clone();
    let n = b.max_degree();
    let r = x
        .reliable_up_to()
        .ok_or_else(|| input(name, format!("max_degree {n} leaves no reliable degree")))?;
    let upto = bound(opts.upto, r, r, &format!("the homology of `{name}`"))?;
    let h = core(x.homology(upto))?;
    report.check(name, "d∘d = 0", verdict(x.validate()));
    report.table(name, "H", h.dims);
    report.reliable(upto);
    Ok(())
}

fn run_cotor<F: Field>(b: &mut Builder<F>, name: &str, opts: &Options, report: &mut Report) -> Result<(), RunError> {
    let (m, c) = match b.object(name)? {
        Obj::Coalgebra(c) => (core(Comodule::trivial(&c, Side::Right))?, c),
        Obj::Bimonoid(h) => {
            let c = h.coalgebra().clone();
            (core(Comodule::trivial(&c, Side::Right))?, c)
        }
        Obj::Comodule(m) if m.side() == Side::Right => {
            let c = m.coalgebra().clone();
            (m, c)
        }
        Obj::Comodule(_) => return Err(input(name, "cotor takes a right comodule")),
        _ => unreachable!("filtered by kind"),
    };
    let n = b.max_degree();
    let top = n.checked_sub(1).ok_or_else(|| input(name, "max_degree 0 leaves no reliable degree"))?;
    let upto = bound(opts.upto, top, top, "Cotor")?;
    report.check(name, "comodule axioms", verdict(m.validate()));
    let h = core(cotor(&m, &c, n))?;
    report.table(name, "Cotor", h.dims[..=upto].to_vec());
    report.reliable(upto);
    Ok(())
}

fn hopf<F: Field>(b: &mut Builder<F>, name: &str, opts: &Options, report: &mut Report) -> Result<(), RunError> {
    let Obj::Bimonoid(h) = b.object(name)? else {
        unreachable!("filtered by kind")
    };
    let n = b.max_degree();
    let upto = bound(opts.upto, n, n, "β_η")?;
    report.check(name, "bimonoid axioms", verdict(h.validate()));
    let r = core(hopf_monoid_check(&h, upto))?;
    report.check(name, &format!("β_η isomorphism in degrees 0..{upto}"), verdict(r.iso));
    match r.quasi_iso {
        Some(v) => report.check(name, &format!("β_η quasi-isomorphism in degrees 0..{upto}"), verdict(v)),
        None => report.notes.push(format!("{name}: quasi-isomorphism check needs upto below {n}")),
    }
    Ok(())
}

fn galois<F: Field>(b: &mut Builder<F>, name: &str, opts: &Options, report: &mut Report) -> Result<(), RunError> {
    let ext = b.extension(name)?;
    let top = b.max_degree().saturating_sub(1);
    let upto = bound(opts.upto, top, top, "β_φ")?;
    let g = core(galois_map(&ext))?;
    report.check(name, "β_φ chain map", verdict(g.map.validate()));
    report.check(
        name,
        &format!("β_φ isomorphism in degrees 0..{upto}"),
        verdict(degreewise_iso(g.map.map(), upto, "β_φ")),
    );
    let qi: Verdict = core(g.map.quasi_iso_by_degree(upto))?.into_iter().collect();
    report.check(name, &format!("β_φ quasi-isomorphism in degrees 0..{upto}"), verdict(qi));
    match compare_with_beta_eta(&ext, &g) {
        Ok(c) => report.check(name, "β_{B⊗η} = B⊗β_η", verdict(c.identity)),
        Err(Error::Precondition(_)) => {}
        Err(e) => return Err(RunError::Core(e)),
    }
    report.reliable(upto);
    Ok(())
}

fn hhg<F: Field>(b: &mut Builder<F>, name: &str, opts: &Options, report: &mut Report) -> Result<(), RunError> {
    let ext = b.extension(name)?;
    let top = b.max_degree().saturating_sub(1);
    let upto = bound(opts.upto, top, top, "the Hopf-Galois conditions")?;
    let r = core(verify_hhg(&ext, upto + 1))?;
    let beta: Verdict = r.beta.into_iter().collect();
    let i_phi: Verdict = r.i_phi.into_iter().collect();
    report.check(name, &format!("β_φ quasi-isomorphism in degrees 0..{upto}"), verdict(beta));
    report.check(name, &format!("i_φ quasi-isomorphism in degrees 0..{upto}"), verdict(i_phi));
    report.reliable(r.reliable_up_to);
    report.notes.push(r.note.to_string());
    Ok(())
}

fn postnikov<F: Field>(b: &mut Builder<F>, name: &str, opts: &Options, report: &mut Report) -> Result<(), RunError> {
    let Obj::Comodule(m) = b.object(name)? else {
        unreachable!("filtered by kind")
    };
    let n = b.max_degree();
    let top = n
        .checked_sub(2)
        .ok_or_else(|| input(name, "Postnikov factorizations need max_degree at least 2"))?;
    let level = bound(opts.upto, top, top, "the Postnikov tower")?;
    report.check(name, "comodule axioms", verdict(m.validate()));
    let f = core(to_zero(&m))?;
    let fact = match postnikov_factorize(&f, level) {
        Ok(fact) => fact,
        Err(Error::Invalid(v)) => {
            report.check(name, "factorization", Err(v.to_string()));
            return Ok(());
        }
        Err(e) => return Err(RunError::Core(e)),
    };
    report.check(name, &format!("p∘i = f with i an injective {level}-equivalence"), Ok(()));
    let legs = fact.tower.iter().all(|s| s.legs_injective());
    report.check(
        name,
        &format!("{} tower stages with injective legs", fact.tower.len()),
        if legs { Ok(()) } else { Err("a pullback leg is not injective".into()) },
    );
    let mid = fact.intermediate().complex();
    if let Some(r) = mid.reliable_up_to() {
        let h = core(mid.homology(r))?;
        report.table(name, "H of the intermediate comodule", h.dims);
        report.reliable(r);
    }
    Ok(())
}

fn coring<F: Field>(b: &mut Builder<F>, name: &str, report: &mut Report) -> Result<(), RunError> {
    let ext = b.extension(name)?;
    let a = ext.algebra().algebra();
    let rho = core(rho_coring(&ext))?;
    report.check(name, "W^ρ = A ⊗ H co-ring axioms", verdict(rho.validate()));
    let canonical = core(canonical_coring(ext.base(), a, ext.phi().map()))?;
    report.check(name, "A ⊗_B A canonical co-ring axioms", verdict(canonical.validate()));
    let trivial = core(trivial_coring(a, ext.coalgebra(), b.max_degree()))?;
    report.check(name, "A ⊗ C trivial co-ring axioms", verdict(trivial.validate()));
    let g = core(galois_as_coring_morphism(&ext))?;
    report.check(name, "β_φ is a co-ring morphism", verdict(g.verdict));
    Ok(())
}

fn descent<F: Field>(b: &mut Builder<F>, name: &str, opts: &Options, report: &mut Report) -> Result<(), RunError> {
    let ext = b.extension(name)?;
    let n = b.max_degree();
    let top = n.saturating_sub(1);
    let upto = bound(opts.upto, top, n, "the descent unit")?;
    let base = DgModule::regular(ext.base(), Side::Right);
    let a = ext.algebra().algebra();
    let phi = ext.phi().map();
    let datum = core(can(&base, a, phi))?;
    report.check(name, "Can(B) descent datum", verdict(datum.validate()));
    let unit = core(descent_unit(&base, a, phi))?;
    report.check(
        name,
        &format!("B → Coinv(Can(B)) isomorphism in degrees 0..{upto}"),
        verdict(degreewise_iso(unit.map(), upto, "descent unit")),
    );
    report.notes.push(format!(
        "{name}: an isomorphic descent unit on B is a necessary condition for faithful flatness, not a proof of it"
    ));
    Ok(())
}
