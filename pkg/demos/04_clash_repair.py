from ljmin.structure import (
    Atom,
    Structure,
    VdwPair,
    classify_contacts,
    find_clashes,
    relax_structure,
    write_pdb,
)

# Two short carbon "strands" squeezed to 2.5 A apart, one residue per atom
atoms = []
for k in range(4):
    atoms.append(Atom(k + 1, "CA", "C", "ALA", "A", k + 1, (3.8 * k, 0.0, 0.0)))
    atoms.append(Atom(k + 5, "CA", "C", "ALA", "B", k + 1, (3.8 * k, 2.5, 0.0)))
model = Structure(tuple(atoms))

before = find_clashes(model)
print("clashes before:", len(before.clashes))

# One LJ term per facing pair, minimum at the vdW contact distance
pairs = [VdwPair(2 * k, 2 * k + 1) for k in range(4)]
res = relax_structure(model, pairs)
print("clashes after:", len(res.after.clashes), " success:", res.success)

contacts = classify_contacts(res.structure)
print("optimal contacts:", len(contacts.optimal), " far:", len(contacts.far))
for c in contacts.optimal[:4]:
    print(f"  {c.i}-{c.j}  d={c.distance:.3f}  d*={c.vdw_sum:.2f}")
print(write_pdb(res.structure))
