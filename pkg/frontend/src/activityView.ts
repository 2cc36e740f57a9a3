/**
 * View model for the live activity screen: colored component blocks on
 * one side, the book page on the other, the mode control, and the
 * per-component delegation toggles.
 *
 * Every control derives its state from the last push frame, so the UI
 * can never emit an event the session engine would reject.
 */

import type { SessionEventBody } from './api'
import type { Actor, ComponentKind, Mode, PushFrame } from './types'
import { COMPONENT_ORDER, LED_MODES } from './types'
import { IconSlot, SlotConfig, modeForSlots, slotsForMode } from './modeControl'

/** The slice of the HTTP client the activity view needs. */
export interface SessionApi {
  sendEvent(sessionId: string, event: SessionEventBody): Promise<PushFrame>
  getSession(sessionId: string): Promise<PushFrame>
}

export interface ComponentBlock {
  component: ComponentKind
  actor: Actor
  expanded: boolean
}

export interface DragResult {
  accepted: boolean
  mode: Mode | null
  reason?: string
}

export class ActivityViewModel {
  private frame: PushFrame | null = null

  constructor(
    private readonly api: SessionApi,
    private readonly sessionId: string,
  ) {}

  /** Apply one push frame; stale frames (older seq) are ignored. */
  applyFrame(frame: PushFrame): boolean {
    if (this.frame !== null && frame.seq <= this.frame.seq) {
      return false
    }
    this.frame = frame
    return true
  }

  get currentFrame(): PushFrame | null {
    return this.frame
  }

  get mode(): Mode | null {
    return this.frame?.state.mode ?? null
  }

  get completed(): boolean {
    return this.frame?.state.status === 'completed'
  }

  /** Slot positions implied by the current mode. */
  get slots(): SlotConfig | null {
    return this.mode === null ? null : slotsForMode(this.mode)
  }

  /**
   * The colored blocks in canonical order. While the session runs,
   * exactly one block (the cursor component) is expanded.
   */
  blocks(): ComponentBlock[] {
    const state = this.frame?.state
    return COMPONENT_ORDER.map((component, index) => ({
      component,
      actor: state?.delegation[component] ?? 'parent',
      expanded:
        state !== undefined && state.status === 'running' && index === state.component_index,
    }))
  }

  expandedBlock(): ComponentKind | null {
    const expanded = this.blocks().filter((b) => b.expanded)
    return expanded.length === 1 ? expanded[0].component : null
  }

  /** Delegation toggles appear only in the two led modes. */
  get togglesVisible(): boolean {
    return this.mode !== null && LED_MODES.includes(this.mode)
  }

  /** "Your turn" reminder for parent-delegated components. */
  get parentTurnReminder(): boolean {
    const directive = this.frame?.state.current_directive
    return directive != null && directive.actor === 'parent'
  }

  get robotStatus(): string {
    if (this.completed) return 'activity complete'
    return this.parentTurnReminder ? "parent's turn" : 'robot active'
  }

  /**
   * Drop one icon on a slot. Legal configurations that change the mode
   * emit a set_mode event; everything else snaps back without a request.
   */
  async dragIcon(icon: 'parent' | 'robot', target: IconSlot): Promise<DragResult> {
    const current = this.slots
    if (current === null) {
      return { accepted: false, mode: null, reason: 'no session frame yet' }
    }
    const proposed: SlotConfig = { ...current, [icon]: target }
    const mode = modeForSlots(proposed)
    if (mode === null) {
      return { accepted: false, mode: null, reason: 'that position is not available' }
    }
    if (mode === this.mode) {
      return { accepted: true, mode }
    }
    const frame = await this.api.sendEvent(this.sessionId, {
      kind: 'set_mode',
      args: { mode },
    })
    this.applyFrame(frame)
    return { accepted: true, mode }
  }

  /**
   * Flip one component's toggle. In takeover modes the toggles are not
   * rendered, so this refuses without touching the network.
   */
  async setDelegation(component: ComponentKind, actor: Actor): Promise<boolean> {
    if (!this.togglesVisible) {
      return false
    }
    const frame = await this.api.sendEvent(this.sessionId, {
      kind: 'set_delegation',
      args: { component, actor },
    })
    this.applyFrame(frame)
    return true
  }

  async next(): Promise<void> {
    this.applyFrame(await this.api.sendEvent(this.sessionId, { kind: 'next' }))
  }

  async repeat(): Promise<void> {
    this.applyFrame(await this.api.sendEvent(this.sessionId, { kind: 'repeat' }))
  }

  /** Resync from the pull endpoint, e.g. after a dropped stream. */
  async refresh(): Promise<void> {
    this.applyFrame(await this.api.getSession(this.sessionId))
  }
}
