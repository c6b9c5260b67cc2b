# The remote-center-of-motion constraint as an augmented linear system.
# The RCM point sits at p_end + lambda (p_ins - p_end); stacking the 6-DoF
# instrument twist constraint over the 3-DoF RCM velocity constraint gives
# a 9x12 system in (qdot, lambdadot) with a 2-DoF task redundancy.

import numpy as np

from rcmteleop import build_context, load_default_chain, rcm_position

np.set_printoptions(precision=4, suppress=True)

chain = load_default_chain()
home = np.array([0.0, 0.6, 0.0, 1.3, 0.0, 1.2416, 0.0, 0.0, 0.0, 0.0, 0.0])

ctx = build_context(chain, home, lam=0.4)
print("p_end ", ctx.p_end)
print("p_ins ", ctx.p_ins)
print("p_rcm ", ctx.p_rcm, "(lambda = 0.4 along the shaft)")

# Sliding lambda moves the point along the shaft line only.
for lam in (0.0, 0.25, 0.5, 1.0):
    print(f"  lambda {lam:4.2f} -> {rcm_position(ctx.p_end, ctx.p_ins, lam)}")

print(f"\nJ_rcm shape {ctx.j_rcm.shape}: interpolated linear Jacobians, "
      f"last column = d_ins = {ctx.j_rcm[:, 11]}")
print(f"J_total shape {ctx.j_total.shape}")
print(f"top-right 6x1 block is zero: {np.all(ctx.j_total[:6, 11] == 0.0)}")

sv = np.linalg.svd(ctx.j_total, compute_uv=False)
print(f"singular values: {sv}")
print(f"rank 9 with 12 unknowns -> null-space dimension "
      f"{12 - int(np.sum(sv > 1e-8 * sv[0]))} "
      f"(gripper + 2 task redundancies)")
